//! Minimal ring interface shared by scalars, polynomials and series towers.
//!
//! The residue engines are generic over this trait so the same integrand
//! assembly runs in `Series<MultiPoly>`, `Series<Series<MultiPoly>>` and
//! friends, with the expansion regime chosen by how the variables are
//! embedded.

use std::fmt;

use super::rational::Rational;
use crate::error::Result;

pub trait Ring: Clone + PartialEq + fmt::Debug + fmt::Display {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, q: &Rational) -> Self;

    /// Multiplicative inverse where one exists.
    fn try_inv(&self) -> Result<Self>;

    /// Exponential, defined for topologically nilpotent elements (zero for
    /// scalars and polynomials, positive valuation for series; a series
    /// whose constant coefficient itself exponentiates is handled by
    /// splitting).
    fn try_exp(&self) -> Result<Self>;

    fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut out = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                out = out.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        out
    }

    /// Integer power, inverting for negative exponents.
    fn pow_i(&self, n: i64) -> Result<Self> {
        if n >= 0 {
            Ok(self.pow(n as u32))
        } else {
            Ok(self.try_inv()?.pow((-n) as u32))
        }
    }
}

impl Ring for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
    fn try_inv(&self) -> Result<Self> {
        self.recip()
    }
    fn try_exp(&self) -> Result<Self> {
        if Rational::is_zero(self) {
            Ok(Rational::one())
        } else {
            Err(crate::error::Error::InvalidArgument(
                "exp of a nonzero scalar is not exact".into(),
            ))
        }
    }
}

impl Ring for super::poly::MultiPoly {
    fn zero() -> Self {
        Self::zero()
    }
    fn one() -> Self {
        Self::one()
    }
    fn is_zero(&self) -> bool {
        self.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        self.add(rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.sub(rhs)
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.mul(rhs)
    }
    fn neg(&self) -> Self {
        self.neg()
    }
    fn scale(&self, q: &Rational) -> Self {
        self.scale(q)
    }
    fn try_inv(&self) -> Result<Self> {
        self.try_inv()
    }
    fn try_exp(&self) -> Result<Self> {
        if self.is_zero() {
            Ok(Self::one())
        } else {
            Err(crate::error::Error::InvalidArgument(
                "exp of a nonzero polynomial is not exact".into(),
            ))
        }
    }
}
