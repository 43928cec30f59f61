//! Arbitrary-precision exact rational numbers, the scalar of every ring here.
//!
//! Backed by `num_rational::BigRational`, which keeps gcd(|num|, den) = 1 and
//! den > 0 after every operation, exactly the normalization we require.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use crate::error::{Error, Result};

/// Exact rational; zero is 0/1, denominators always positive and reduced.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

impl Rational {
    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    /// num/den; panics on den = 0.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "zero denominator");
        Rational(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// -1, 0 or +1.
    pub fn signum(&self) -> i32 {
        match self.0.cmp(&BigRational::zero()) {
            Ordering::Less => -1,
            Ordering::Equal => 0,
            Ordering::Greater => 1,
        }
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::NotInvertible("zero rational".into()));
        }
        Ok(Rational(self.0.recip()))
    }

    /// Integer power; negative exponents invert (error on 0^negative).
    pub fn pow(&self, e: i64) -> Result<Self> {
        if e < 0 {
            return Ok(Rational(self.recip()?.0.pow((-e) as i32)));
        }
        Ok(Rational(self.0.pow(e as i32)))
    }

    /// (-1)^e as a rational.
    pub fn neg_one_pow(e: i64) -> Self {
        if e % 2 == 0 {
            Self::one()
        } else {
            -Self::one()
        }
    }

    /// Exact string form: "num/den", with "/den" omitted when den = 1.
    pub fn to_exact_string(&self) -> String {
        if self.0.is_integer() {
            self.0.numer().to_string()
        } else {
            format!("{}/{}", self.0.numer(), self.0.denom())
        }
    }

    /// Parse the exact string form back; inverse of `to_exact_string`.
    pub fn parse(s: &str) -> Result<Self> {
        let mk = |v: &str| {
            BigInt::from_str(v.trim())
                .map_err(|e| Error::InvalidArgument(format!("bad rational {s:?}: {e}")))
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let den = mk(d)?;
                if den.is_zero() {
                    return Err(Error::InvalidArgument(format!("zero denominator in {s:?}")));
                }
                Ok(Rational(BigRational::new(mk(n)?, den)))
            }
            None => Ok(Rational(BigRational::from_integer(mk(s)?))),
        }
    }
}

/// n! as a rational; 0 for n < 0 (vanishing convention of the pairing formulas).
pub fn factorial(n: i64) -> Rational {
    if n < 0 {
        return Rational::zero();
    }
    let mut acc = BigInt::one();
    for t in 2..=n {
        acc *= t;
    }
    Rational::from_bigint(acc)
}

/// Combinatorial binomial: 0 unless 0 <= r <= n.
///
/// This is the convention under which the extra pairing-matrix columns
/// outside the redundancy range vanish.
pub fn binom(n: i64, r: i64) -> Rational {
    if r < 0 || n < 0 || r > n {
        return Rational::zero();
    }
    let r = r.min(n - r);
    let mut acc = BigInt::one();
    for t in 0..r {
        acc = acc * BigInt::from(n - t) / BigInt::from(t + 1);
    }
    Rational::from_bigint(acc)
}

/// Falling-factorial binomial x(x-1)...(x-r+1)/r!, the polynomial extension
/// of `binom` used whenever the upper argument is symbolic or negative.
pub fn binom_general(x: &Rational, r: i64) -> Rational {
    if r < 0 {
        return Rational::zero();
    }
    let mut acc = Rational::one();
    for t in 0..r {
        acc = acc * (x.clone() - Rational::from_int(t));
    }
    acc * factorial(r).recip().expect("r! > 0")
}

macro_rules! binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
    };
}

binop!(Add, add, +);
binop!(Sub, sub, -);
binop!(Mul, mul, *);

impl Div for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(self.0 / rhs.0)
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl<'a> Neg for &'a Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0.clone())
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign for Rational {
    fn sub_assign(&mut self, rhs: Rational) {
        self.0 -= rhs.0;
    }
}

impl MulAssign for Rational {
    fn mul_assign(&mut self, rhs: Rational) {
        self.0 *= rhs.0;
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_exact_string())
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_exact_string())
    }
}
