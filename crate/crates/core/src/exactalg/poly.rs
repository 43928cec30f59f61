//! Sparse multivariate polynomials over `Rational` in a fixed variable list.
//!
//! The variable ordering is global and fixed once, for canonical term
//! ordering and reproducible serialization:
//!
//! ```text
//! alpha, beta, gamma4, eta, A, G, B, u
//! ```
//!
//! `gamma4` carries the class 4*gamma; the conversion gamma = gamma4/4 is
//! applied only at the reporting boundary. Exponents are stored as signed
//! integers: intermediate series coefficients legitimately pick up negative
//! powers of `A` (the residue engines clear them again before any value is
//! reported), while every public value is checked to be a true polynomial.

use std::collections::BTreeMap;
use std::fmt;

use super::rational::Rational;
use crate::error::{Error, Result};

pub const NVARS: usize = 8;

/// Position of each formal variable in the exponent vector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PolyVar {
    Alpha = 0,
    Beta = 1,
    Gamma4 = 2,
    Eta = 3,
    A = 4,
    G = 5,
    B = 6,
    U = 7,
}

pub const VAR_NAMES: [&str; NVARS] = ["alpha", "beta", "gamma4", "eta", "A", "G", "B", "u"];

pub type Expt = [i16; NVARS];

/// Sparse multivariate polynomial; no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct MultiPoly {
    terms: BTreeMap<Expt, Rational>,
}

impl MultiPoly {
    pub fn zero() -> Self {
        MultiPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert([0; NVARS], c);
        }
        p
    }

    pub fn var(v: PolyVar) -> Self {
        Self::monomial(v, 1, Rational::one())
    }

    pub fn monomial(v: PolyVar, exp: i16, coeff: Rational) -> Self {
        let mut e = [0i16; NVARS];
        e[v as usize] = exp;
        Self::term(e, coeff)
    }

    pub fn term(e: Expt, coeff: Rational) -> Self {
        let mut p = Self::zero();
        if !coeff.is_zero() {
            p.terms.insert(e, coeff);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&Expt, &Rational)> {
        self.terms.iter()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            match out.terms.get_mut(e) {
                Some(acc) => {
                    *acc += c.clone();
                    if acc.is_zero() {
                        out.terms.remove(e);
                    }
                }
                None => {
                    out.terms.insert(*e, c.clone());
                }
            }
        }
        out
    }

    pub fn neg(&self) -> Self {
        MultiPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut acc: BTreeMap<Expt, Rational> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let mut e = *ea;
                for (x, y) in e.iter_mut().zip(eb.iter()) {
                    *x += *y;
                }
                let prod = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => {
                        *v += prod;
                    }
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        MultiPoly { terms: acc }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        MultiPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn pow(&self, mut n: u32) -> Self {
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

    /// Partial derivative with respect to one variable.
    pub fn deriv(&self, v: PolyVar) -> Self {
        let i = v as usize;
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let k = e[i];
            if k == 0 {
                continue;
            }
            let mut e2 = *e;
            e2[i] = k - 1;
            let c2 = c * &Rational::from_int(k as i64);
            out.terms.insert(e2, c2);
        }
        out.terms.retain(|_, v| !v.is_zero());
        out
    }

    /// Multiply by var^k (k may be negative).
    pub fn mul_var_pow(&self, v: PolyVar, k: i16) -> Self {
        let i = v as usize;
        MultiPoly {
            terms: self
                .terms
                .iter()
                .map(|(e, c)| {
                    let mut e2 = *e;
                    e2[i] += k;
                    (e2, c.clone())
                })
                .collect(),
        }
    }

    /// Set one variable to zero. Errors if a term carries a negative power
    /// of it (that would be a pole, not a value).
    pub fn eval_var_zero(&self, v: PolyVar) -> Result<Self> {
        let i = v as usize;
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] < 0 {
                return Err(Error::DivisionError(format!(
                    "evaluation at {} = 0 hits a pole of order {}",
                    VAR_NAMES[i], -e[i]
                )));
            }
            if e[i] > 0 {
                continue;
            }
            out.terms.insert(*e, c.clone());
        }
        Ok(out)
    }

    /// The coefficient of the constant monomial.
    pub fn constant_term(&self) -> Rational {
        self.terms
            .get(&[0; NVARS])
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    /// The whole polynomial as a rational, if it is constant.
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => self.terms.get(&[0; NVARS]).cloned(),
            _ => None,
        }
    }

    /// Coefficient of var^k, as a polynomial in the remaining variables.
    pub fn coeff_of(&self, v: PolyVar, k: i16) -> Self {
        let i = v as usize;
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            if e[i] == k {
                let mut e2 = *e;
                e2[i] = 0;
                out.terms.insert(e2, c.clone());
            }
        }
        out
    }

    /// Largest exponent of one variable (None when the poly is zero).
    pub fn max_exp(&self, v: PolyVar) -> Option<i16> {
        self.terms.keys().map(|e| e[v as usize]).max()
    }

    /// True when every exponent is nonnegative (a genuine polynomial).
    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|&x| x >= 0))
    }

    /// Total degree in the subset of variables, by maximum over terms.
    pub fn total_degree_in(&self, vars: &[PolyVar]) -> i32 {
        self.terms
            .keys()
            .map(|e| vars.iter().map(|&v| e[v as usize] as i32).sum())
            .max()
            .unwrap_or(0)
    }

    /// Drop every term of total degree > cap in the given variables.
    /// Quotient-ring truncation used by the degree-capped engines.
    pub fn truncate_degree_in(&self, vars: &[PolyVar], cap: i32) -> Self {
        MultiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(e, _)| {
                    vars.iter().map(|&v| e[v as usize] as i32).sum::<i32>() <= cap
                })
                .map(|(e, c)| (*e, c.clone()))
                .collect(),
        }
    }

    /// Substitute a polynomial for one variable. The replacement must be a
    /// genuine polynomial; negative powers of `v` in self are not allowed.
    pub fn substitute(&self, v: PolyVar, repl: &MultiPoly) -> Result<Self> {
        let i = v as usize;
        let max = self.terms.keys().map(|e| e[i]).max().unwrap_or(0);
        if self.terms.keys().any(|e| e[i] < 0) {
            return Err(Error::InvalidArgument(format!(
                "cannot substitute into a negative power of {}",
                VAR_NAMES[i]
            )));
        }
        // powers of repl up to max
        let mut pows = Vec::with_capacity(max as usize + 1);
        pows.push(Self::one());
        for _ in 0..max {
            pows.push(pows.last().unwrap().mul(repl));
        }
        let mut out = Self::zero();
        for (e, c) in &self.terms {
            let mut e2 = *e;
            let k = e2[i];
            e2[i] = 0;
            out = out.add(&Self::term(e2, c.clone()).mul(&pows[k as usize]));
        }
        Ok(out)
    }

    /// Single-term units invert (Laurent monomials); anything else does not.
    pub fn try_inv(&self) -> Result<Self> {
        if self.terms.len() != 1 {
            return Err(Error::NotInvertible(format!(
                "polynomial with {} terms is not a monomial",
                self.terms.len()
            )));
        }
        let (e, c) = self.terms.iter().next().unwrap();
        let mut e2 = [0i16; NVARS];
        for (x, y) in e2.iter_mut().zip(e.iter()) {
            *x = -y;
        }
        Ok(Self::term(e2, c.recip()?))
    }

    /// Sorted term list as (monomial string, exact coefficient string).
    pub fn term_list(&self) -> Vec<(String, String)> {
        self.terms
            .iter()
            .map(|(e, c)| (monomial_string(e), c.to_exact_string()))
            .collect()
    }
}

fn monomial_string(e: &Expt) -> String {
    let mut parts = Vec::new();
    for (i, &k) in e.iter().enumerate() {
        if k == 0 {
            continue;
        }
        if k == 1 {
            parts.push(VAR_NAMES[i].to_string());
        } else {
            parts.push(format!("{}^{}", VAR_NAMES[i], k));
        }
    }
    if parts.is_empty() {
        "1".to_string()
    } else {
        parts.join("*")
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in &self.terms {
            let mono = monomial_string(e);
            let (sign, mag) = if c.is_negative() {
                ("-", -c)
            } else {
                ("+", c.clone())
            };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
                first = false;
            } else {
                write!(f, " {} ", sign)?;
            }
            if mono == "1" {
                write!(f, "{}", mag.to_exact_string())?;
            } else if mag.is_one() {
                write!(f, "{}", mono)?;
            } else {
                write!(f, "{}*{}", mag.to_exact_string(), mono)?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
