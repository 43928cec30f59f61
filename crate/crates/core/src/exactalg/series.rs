//! Truncated formal Laurent series with tracked truncation order.
//!
//! A `Series<C>` stores coefficients for exponents in `[min_exp, ord)` of a
//! distinguished variable; everything at exponent >= `ord` is *unknown*, not
//! zero. Every operation derives the order actually achieved by its result,
//! so a coefficient extraction beyond the achieved order fails loudly with
//! an insufficient-precision error instead of returning a wrong value.
//! Silent truncation is the dominant bug class in residue calculus; this
//! type makes it unrepresentable.
//!
//! The principal part (negative exponents) is always finite and fully
//! recorded, so `residue` (the coefficient of exponent -1) is well defined
//! whenever it lies inside the known window.

use std::fmt;

use super::rational::Rational;
use super::ring::Ring;
use crate::error::{Error, Result};

/// Distinguished series variables appearing in the residue formulas.
/// `Any` tags the context-free ring constants (zero, one) that unify with
/// every variable; they exist so that series towers can nest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    Y,
    T,
    U,
    S,
    Any,
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Var::Y => "y",
            Var::T => "t",
            Var::U => "u",
            Var::S => "s",
            Var::Any => "_",
        };
        write!(f, "{}", s)
    }
}

/// Order bound standing in for "known to every order" (ring constants).
pub const ORD_INF: i64 = i64::MAX / 4;

#[derive(Clone, PartialEq)]
pub struct Series<C: Ring> {
    var: Var,
    min_exp: i64,
    coeffs: Vec<C>,
    ord: i64,
}

impl<C: Ring> Series<C> {
    /// The zero series, known zero below `ord`.
    pub fn zero(var: Var, ord: i64) -> Self {
        Series {
            var,
            min_exp: ord,
            coeffs: Vec::new(),
            ord,
        }
    }

    pub fn constant(var: Var, c: C, ord: i64) -> Self {
        Self::monomial(var, 0, c, ord)
    }

    pub fn one(var: Var, ord: i64) -> Self {
        Self::constant(var, C::one(), ord)
    }

    pub fn monomial(var: Var, exp: i64, c: C, ord: i64) -> Self {
        let mut s = Series {
            var,
            min_exp: exp,
            coeffs: vec![c],
            ord,
        };
        s.normalize();
        s
    }

    /// Series from (exponent, coefficient) pairs; pairs at exponent >= ord
    /// are discarded (they are still unknown territory, not errors).
    pub fn from_terms(var: Var, terms: &[(i64, C)], ord: i64) -> Self {
        let mut s = Self::zero(var, ord);
        for (e, c) in terms {
            if *e < ord && !c.is_zero() {
                s = s
                    .checked_add(&Self::monomial(var, *e, c.clone(), ord))
                    .expect("same variable");
            }
        }
        s
    }

    pub fn var(&self) -> Var {
        self.var
    }

    /// Truncation bound: coefficients at exponents >= ord are unknown.
    pub fn ord(&self) -> i64 {
        self.ord
    }

    /// Best known lower bound for the valuation; exact when the series is
    /// nonzero on its window.
    pub fn valuation(&self) -> i64 {
        if self.coeffs.is_empty() {
            self.ord
        } else {
            self.min_exp
        }
    }

    /// True if every known coefficient vanishes.
    pub fn is_zero_on_window(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn normalize(&mut self) {
        if self.min_exp >= self.ord {
            self.coeffs.clear();
            self.min_exp = self.ord;
            return;
        }
        let keep = (self.ord - self.min_exp).min(self.coeffs.len() as i64).max(0) as usize;
        self.coeffs.truncate(keep);
        while self.coeffs.last().map_or(false, |c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead_zeros = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead_zeros > 0 {
            self.coeffs.drain(..lead_zeros);
            self.min_exp += lead_zeros as i64;
        }
        if self.coeffs.is_empty() {
            self.min_exp = self.ord;
        }
    }

    fn check_var(&self, rhs: &Self) -> Result<Var> {
        match (self.var, rhs.var) {
            (Var::Any, v) => Ok(v),
            (v, Var::Any) => Ok(v),
            (a, b) if a == b => Ok(a),
            (a, b) => Err(Error::RingMismatch {
                expected: a,
                found: b,
            }),
        }
    }

    /// Coefficient of var^e; errors when e is beyond the achieved order.
    pub fn coeff(&self, e: i64) -> Result<C> {
        if e >= self.ord {
            return Err(Error::InsufficientPrecision {
                var: self.var,
                requested: e,
                achieved: self.ord,
            });
        }
        let idx = e - self.min_exp;
        if idx < 0 || idx >= self.coeffs.len() as i64 {
            Ok(C::zero())
        } else {
            Ok(self.coeffs[idx as usize].clone())
        }
    }

    /// Known (exponent, coefficient) pairs, nonzero coefficients only.
    pub fn iter_terms(&self) -> impl Iterator<Item = (i64, &C)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.min_exp + i as i64, c))
    }

    /// The residue: coefficient of exponent -1. Never silently zero; errors
    /// if the truncation bound makes that coefficient unavailable.
    pub fn residue(&self) -> Result<C> {
        self.coeff(-1)
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self> {
        let var = self.check_var(rhs)?;
        let ord = self.ord.min(rhs.ord);
        let min = self.valuation().min(rhs.valuation()).min(ord);
        // coefficients past both stored windows are known zero, so the
        // allocation only needs to cover the union of the windows
        let top = ord.min(self.max_known_exp().max(rhs.max_known_exp()) + 1);
        let len = (top - min).max(0) as usize;
        let mut coeffs = vec![C::zero(); len];
        for src in [self, rhs] {
            for (i, c) in src.coeffs.iter().enumerate() {
                let e = src.min_exp + i as i64;
                if e < ord && !c.is_zero() {
                    let idx = (e - min) as usize;
                    coeffs[idx] = coeffs[idx].add(c);
                }
            }
        }
        let mut out = Series {
            var,
            min_exp: min,
            coeffs,
            ord,
        };
        out.normalize();
        Ok(out)
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self> {
        self.checked_add(&rhs.map_coeffs(|c| c.neg()))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self> {
        let var = self.check_var(rhs)?;
        // the unknown tail of either factor pollutes exponents past these bounds
        let ord = (self.ord.saturating_add(rhs.valuation()))
            .min(rhs.ord.saturating_add(self.valuation()));
        if self.coeffs.is_empty() || rhs.coeffs.is_empty() {
            return Ok(Series::zero(var, ord));
        }
        let min = self.min_exp + rhs.min_exp;
        let top = ord.min(self.max_known_exp() + rhs.max_known_exp() + 1);
        let len = (top - min).max(0) as usize;
        let mut coeffs = vec![C::zero(); len];
        for (i, ca) in self.coeffs.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            let ea = self.min_exp + i as i64;
            for (j, cb) in rhs.coeffs.iter().enumerate() {
                let e = ea + rhs.min_exp + j as i64;
                if e >= ord {
                    break;
                }
                if cb.is_zero() {
                    continue;
                }
                let idx = (e - min) as usize;
                coeffs[idx] = coeffs[idx].add(&ca.mul(cb));
            }
        }
        let mut out = Series {
            var,
            min_exp: min,
            coeffs,
            ord,
        };
        out.normalize();
        Ok(out)
    }

    /// Coefficient map into a different ring, keeping window and order.
    pub fn map_coeffs_into<D: Ring>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        let mut out = Series {
            var: self.var,
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| f(c)).collect(),
            ord: self.ord,
        };
        out.normalize();
        out
    }

    pub fn map_coeffs(&self, f: impl Fn(&C) -> C) -> Self {
        let mut out = Series {
            var: self.var,
            min_exp: self.min_exp,
            coeffs: self.coeffs.iter().map(|c| f(c)).collect(),
            ord: self.ord,
        };
        out.normalize();
        out
    }

    pub fn mul_coeff(&self, c: &C) -> Self {
        self.map_coeffs(|x| x.mul(c))
    }

    pub fn scale_rat(&self, q: &Rational) -> Self {
        self.map_coeffs(|x| x.scale(q))
    }

    /// Multiply by var^k (k may be negative); this shifts the known window.
    pub fn shift(&self, k: i64) -> Self {
        Series {
            var: self.var,
            min_exp: self.min_exp + k,
            coeffs: self.coeffs.clone(),
            ord: self.ord + k,
        }
    }

    /// Lower the truncation bound.
    pub fn truncate(&self, new_ord: i64) -> Self {
        let mut out = self.clone();
        out.ord = out.ord.min(new_ord);
        out.normalize();
        out
    }

    /// Inverse, defined when the leading coefficient is a unit. The achieved
    /// order drops by twice the valuation.
    pub fn checked_inv(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::NotInvertible(format!(
                "series in {} is zero on its known window (order {})",
                self.var, self.ord
            )));
        }
        let m = self.min_exp;
        let lead_inv = self.coeffs[0].try_inv()?;
        if self.coeffs.len() == 1 {
            // monomial: exact inverse c^-1 var^-m
            return Ok(Series {
                var: self.var,
                min_exp: -m,
                coeffs: vec![lead_inv],
                ord: self.ord.saturating_sub(2 * m),
            });
        }
        assert!(
            self.ord < ORD_INF / 2,
            "inverting an unbounded non-monomial series"
        );
        let out_min = -m;
        let out_ord = self.ord - 2 * m;
        let len = (out_ord - out_min) as usize;
        let mut out = vec![C::zero(); len];
        out[0] = lead_inv.clone();
        for t in 1..len {
            // b_t = -a_m^{-1} * sum_{s=1..t} a_{m+s} b_{t-s}
            let mut acc = C::zero();
            for s in 1..=t.min(self.coeffs.len() - 1) {
                if self.coeffs[s].is_zero() || out[t - s].is_zero() {
                    continue;
                }
                acc = acc.add(&self.coeffs[s].mul(&out[t - s]));
            }
            if !acc.is_zero() {
                out[t] = lead_inv.mul(&acc).neg();
            }
        }
        let mut s = Series {
            var: self.var,
            min_exp: out_min,
            coeffs: out,
            ord: out_ord,
        };
        s.normalize();
        Ok(s)
    }

    /// exp of the series. The constant coefficient must itself exponentiate
    /// (zero for scalar/polynomial coefficients, positive valuation for
    /// nested series); a pole is rejected.
    pub fn checked_exp(&self) -> Result<Self> {
        if self.valuation() < 0 {
            return Err(Error::InvalidArgument(format!(
                "exp of a series in {} with a pole (valuation {})",
                self.var,
                self.valuation()
            )));
        }
        if self.ord <= 0 {
            return Err(Error::InsufficientPrecision {
                var: self.var,
                requested: 0,
                achieved: self.ord,
            });
        }
        let c0 = self.coeff(0)?;
        let (factor, rest) = if c0.is_zero() {
            (None, self.clone())
        } else {
            let minus = Series::constant(self.var, c0.neg(), self.ord);
            (Some(c0.try_exp()?), self.checked_add(&minus)?)
        };
        let o = rest.ord;
        assert!(
            rest.is_zero_on_window() || o < ORD_INF / 2,
            "exp of an unbounded non-constant series"
        );
        let mut acc = Series::one(self.var, o);
        let mut term = Series::one(self.var, o);
        let mut k: i64 = 1;
        while term.valuation() + rest.valuation() < o && !rest.is_zero_on_window() {
            term = term.checked_mul(&rest)?;
            term = term.scale_rat(&Rational::from_int(k).recip().expect("k > 0"));
            if term.is_zero_on_window() {
                break;
            }
            acc = acc.checked_add(&term)?;
            k += 1;
        }
        match factor {
            Some(f) => Ok(acc.mul_coeff(&f)),
            None => Ok(acc),
        }
    }

    /// sinh and cosh computed from one exp pair.
    fn exp_pair(&self) -> Result<(Self, Self)> {
        let e = self.checked_exp()?;
        let em = self.map_coeffs(|c| c.neg()).checked_exp()?;
        Ok((e, em))
    }

    pub fn checked_sinh(&self) -> Result<Self> {
        let (e, em) = self.exp_pair()?;
        Ok(e.checked_sub(&em)?.scale_rat(&Rational::new(1, 2)))
    }

    pub fn checked_cosh(&self) -> Result<Self> {
        let (e, em) = self.exp_pair()?;
        Ok(e.checked_add(&em)?.scale_rat(&Rational::new(1, 2)))
    }

    /// tanh = sinh/cosh; cosh has unit constant term, so this is a power
    /// series whenever self has positive valuation.
    pub fn checked_tanh(&self) -> Result<Self> {
        let (e, em) = self.exp_pair()?;
        let s = e.checked_sub(&em)?;
        let c = e.checked_add(&em)?;
        s.checked_mul(&c.checked_inv()?)
    }

    /// Composition: substitute `repl` for the distinguished variable of
    /// self. The result lives in the variable of `repl`. The replacement
    /// must have positive valuation (or be zero), except when self is a
    /// finite polynomial in its stored window and has no principal part.
    pub fn substitute(&self, repl: &Self) -> Result<Self> {
        let v = repl.valuation();
        if !repl.is_zero_on_window() && v < 1 {
            return Err(Error::InvalidArgument(
                "substitution target must have positive valuation or be zero".into(),
            ));
        }
        if repl.is_zero_on_window() && self.min_exp < 0 {
            return Err(Error::InvalidArgument(
                "substitution of zero into a principal part".into(),
            ));
        }
        // unknown coefficients of self (exponents >= ord) contribute only at
        // exponents >= ord * v
        let tail_bound = if v >= 1 {
            self.ord.saturating_mul(v)
        } else {
            i64::MAX / 4
        };
        let mut acc = Series::zero(repl.var, tail_bound);
        let max_e = self.max_known_exp();
        let mut pow = Series::one(repl.var, tail_bound);
        for e in 0..=max_e.max(0) {
            if e >= self.min_exp && e < self.ord {
                let c = self.coeff(e)?;
                if !c.is_zero() {
                    acc = acc.checked_add(&pow.mul_coeff(&c))?;
                }
            }
            if e < max_e {
                pow = pow.checked_mul(repl)?;
            }
        }
        if self.min_exp < 0 {
            let inv = repl.checked_inv()?;
            let mut pow = inv.clone();
            let mut e = -1i64;
            while e >= self.min_exp {
                let c = self.coeff(e)?;
                if !c.is_zero() {
                    acc = acc.checked_add(&pow.mul_coeff(&c))?;
                }
                e -= 1;
                if e >= self.min_exp {
                    pow = pow.checked_mul(&inv)?;
                }
            }
        }
        Ok(acc)
    }

    fn max_known_exp(&self) -> i64 {
        if self.coeffs.is_empty() {
            self.min_exp - 1
        } else {
            self.min_exp + self.coeffs.len() as i64 - 1
        }
    }

    /// Formal derivative d/dvar; the achieved order drops by one.
    pub fn deriv(&self) -> Self {
        let mut out = Series {
            var: self.var,
            min_exp: self.min_exp - 1,
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.scale(&Rational::from_int(self.min_exp + i as i64)))
                .collect(),
            ord: self.ord - 1,
        };
        out.normalize();
        out
    }
}

/// a / b as a Laurent series: the dedicated division producing a finite
/// principal part, used wherever a factor like coth would introduce a pole.
pub fn laurent_div<C: Ring>(a: &Series<C>, b: &Series<C>) -> Result<Series<C>> {
    a.checked_mul(&b.checked_inv()?)
}

impl<C: Ring> fmt::Display for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.iter_terms() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if e == 0 {
                write!(f, "({})", c)?;
            } else {
                write!(f, "({})*{}^{}", c, self.var, e)?;
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O({}^{})", self.var, self.ord)
    }
}

impl<C: Ring> fmt::Debug for Series<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl<C: Ring> Ring for Series<C> {
    fn zero() -> Self {
        Series::zero(Var::Any, ORD_INF)
    }
    fn one() -> Self {
        Series::one(Var::Any, ORD_INF)
    }
    fn is_zero(&self) -> bool {
        self.is_zero_on_window()
    }
    fn add(&self, rhs: &Self) -> Self {
        self.checked_add(rhs).expect("series variable mismatch")
    }
    fn sub(&self, rhs: &Self) -> Self {
        self.checked_sub(rhs).expect("series variable mismatch")
    }
    fn mul(&self, rhs: &Self) -> Self {
        self.checked_mul(rhs).expect("series variable mismatch")
    }
    fn neg(&self) -> Self {
        self.map_coeffs(|c| c.neg())
    }
    fn scale(&self, q: &Rational) -> Self {
        self.scale_rat(q)
    }
    fn try_inv(&self) -> Result<Self> {
        self.checked_inv()
    }
    fn try_exp(&self) -> Result<Self> {
        self.checked_exp()
    }
    // the default would call the context-free one(); build from the base instead
    fn pow(&self, n: u32) -> Self {
        if n == 0 {
            return Series::one(self.var, self.ord);
        }
        let mut result: Option<Self> = None;
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = Some(match result {
                    None => base.clone(),
                    Some(r) => r.mul(&base),
                });
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result.unwrap()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactalg::poly::{MultiPoly, PolyVar};

    type QS = Series<Rational>;
    type PS = Series<MultiPoly>;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn one_plus_y(ord: i64) -> QS {
        QS::from_terms(
            Var::Y,
            &[(0, Rational::one()), (1, Rational::one())],
            ord,
        )
    }

    fn one_minus_y(ord: i64) -> QS {
        QS::from_terms(
            Var::Y,
            &[(0, Rational::one()), (1, -Rational::one())],
            ord,
        )
    }

    #[test]
    fn mul_difference_of_squares() {
        let p = one_plus_y(5).checked_mul(&one_minus_y(5)).unwrap();
        assert_eq!(p.coeff(0).unwrap(), Rational::one());
        assert_eq!(p.coeff(1).unwrap(), Rational::zero());
        assert_eq!(p.coeff(2).unwrap(), -Rational::one());
        assert_eq!(p.coeff(3).unwrap(), Rational::zero());
        assert_eq!(p.ord(), 5);
    }

    #[test]
    fn geometric_series_inverse() {
        // (sum y^n, order 3) * (1-y) = 1 (mod y^3)
        let geo = QS::from_terms(
            Var::Y,
            &[(0, Rational::one()), (1, Rational::one()), (2, Rational::one())],
            3,
        );
        let p = geo.checked_mul(&one_minus_y(3)).unwrap();
        assert_eq!(p.coeff(0).unwrap(), Rational::one());
        assert_eq!(p.coeff(1).unwrap(), Rational::zero());
        assert_eq!(p.coeff(2).unwrap(), Rational::zero());
    }

    #[test]
    fn mul_with_polynomial_coefficients() {
        // (A + y)(G + y) = AG + (A+G) y + y^2
        let a = MultiPoly::var(PolyVar::A);
        let g = MultiPoly::var(PolyVar::G);
        let f1 = PS::from_terms(Var::Y, &[(0, a.clone()), (1, MultiPoly::one())], 9);
        let f2 = PS::from_terms(Var::Y, &[(0, g.clone()), (1, MultiPoly::one())], 9);
        let p = f1.checked_mul(&f2).unwrap();
        assert_eq!(p.coeff(0).unwrap(), a.mul(&g));
        assert_eq!(p.coeff(1).unwrap(), a.add(&g));
        assert_eq!(p.coeff(2).unwrap(), MultiPoly::one());
    }

    #[test]
    fn inverse_examples() {
        let inv = one_minus_y(4).checked_inv().unwrap();
        for e in 0..4 {
            assert_eq!(inv.coeff(e).unwrap(), Rational::one());
        }
        // inv(2) = 1/2
        let two = QS::constant(Var::Y, Rational::from_int(2), 4);
        assert_eq!(two.checked_inv().unwrap().coeff(0).unwrap(), q(1, 2));
        // inv(1+2t) at order 3 = 1 - 2t + 4t^2
        let f = QS::from_terms(Var::T, &[(0, Rational::one()), (1, Rational::from_int(2))], 3);
        let i = f.checked_inv().unwrap();
        assert_eq!(i.coeff(0).unwrap(), Rational::one());
        assert_eq!(i.coeff(1).unwrap(), Rational::from_int(-2));
        assert_eq!(i.coeff(2).unwrap(), Rational::from_int(4));
        // two-sided inverse up to truncation
        let prod = f.checked_mul(&i).unwrap();
        assert_eq!(prod.coeff(0).unwrap(), Rational::one());
        assert_eq!(prod.coeff(1).unwrap(), Rational::zero());
        assert_eq!(prod.coeff(2).unwrap(), Rational::zero());
        // non-unit constant term over MultiPoly coefficients
        let bad = PS::from_terms(
            Var::Y,
            &[(0, MultiPoly::var(PolyVar::A).add(&MultiPoly::one()))],
            4,
        );
        assert!(bad.checked_inv().is_err());
    }

    #[test]
    fn exp_examples() {
        let zero = PS::zero(Var::Y, 5);
        let e = zero.checked_exp().unwrap();
        assert_eq!(e.coeff(0).unwrap(), MultiPoly::one());
        // exp(Ay) at order 3 = 1 + Ay + A^2 y^2/2
        let a = MultiPoly::var(PolyVar::A);
        let ay = PS::monomial(Var::Y, 1, a.clone(), 3);
        let e = ay.checked_exp().unwrap();
        assert_eq!(e.coeff(0).unwrap(), MultiPoly::one());
        assert_eq!(e.coeff(1).unwrap(), a.clone());
        assert_eq!(e.coeff(2).unwrap(), a.pow(2).scale(&q(1, 2)));
        // exp(y) exp(-y) = 1 at order 6
        let y = QS::monomial(Var::Y, 1, Rational::one(), 6);
        let p = y
            .checked_exp()
            .unwrap()
            .checked_mul(&y.map_coeffs(|c| -c).checked_exp().unwrap())
            .unwrap();
        assert_eq!(p.coeff(0).unwrap(), Rational::one());
        for e in 1..6 {
            assert_eq!(p.coeff(e).unwrap(), Rational::zero(), "exponent {e}");
        }
        // nonzero constant term is rejected over scalar coefficients
        assert!(one_plus_y(4).checked_exp().is_err());
    }

    #[test]
    fn hyperbolic_examples() {
        let a = MultiPoly::var(PolyVar::A);
        let ay = PS::monomial(Var::Y, 1, a.clone(), 4);
        let s = ay.checked_sinh().unwrap();
        assert_eq!(s.coeff(1).unwrap(), a.clone());
        assert_eq!(s.coeff(2).unwrap(), MultiPoly::zero());
        assert_eq!(s.coeff(3).unwrap(), a.pow(3).scale(&q(1, 6)));
        let c = PS::zero(Var::Y, 4).checked_cosh().unwrap();
        assert_eq!(c.coeff(0).unwrap(), MultiPoly::one());
        let t = QS::monomial(Var::Y, 1, Rational::one(), 4)
            .checked_tanh()
            .unwrap();
        assert_eq!(t.coeff(1).unwrap(), Rational::one());
        assert_eq!(t.coeff(3).unwrap(), q(-1, 3));
    }

    #[test]
    fn hyperbolic_identity_cosh2_minus_sinh2() {
        let a = MultiPoly::var(PolyVar::A);
        let arg = PS::from_terms(
            Var::Y,
            &[(1, a.clone()), (3, a.pow(2).scale(&q(2, 3)))],
            8,
        );
        let s = arg.checked_sinh().unwrap();
        let c = arg.checked_cosh().unwrap();
        let id = c
            .checked_mul(&c)
            .unwrap()
            .checked_sub(&s.checked_mul(&s).unwrap())
            .unwrap();
        assert_eq!(id.coeff(0).unwrap(), MultiPoly::one());
        for e in 1..id.ord() {
            assert_eq!(id.coeff(e).unwrap(), MultiPoly::zero(), "exponent {e}");
        }
    }

    #[test]
    fn substitution_examples() {
        // u^2 with u -> y tanh(-Ay/2): coefficient of y^4 is A^2/4
        let a = MultiPoly::var(PolyVar::A);
        let arg = PS::monomial(Var::Y, 1, a.scale(&q(-1, 2)), 5);
        let repl = PS::monomial(Var::Y, 1, MultiPoly::one(), 6)
            .checked_mul(&arg.checked_tanh().unwrap())
            .unwrap();
        let u2 = PS::monomial(Var::U, 2, MultiPoly::one(), 9);
        let sub = u2.substitute(&repl).unwrap();
        assert_eq!(sub.var(), Var::Y);
        assert_eq!(sub.coeff(4).unwrap(), a.pow(2).scale(&q(1, 4)));
        // y -> 0 in 1 + y
        let z = QS::zero(Var::Y, 9);
        let res = one_plus_y(9).substitute(&z).unwrap();
        assert_eq!(res.coeff(0).unwrap(), Rational::one());
        assert!(res.coeff(1).unwrap().is_zero());
        // t -> t/(1-t) in (1+t)^2, order 3: 1 + 2t + 3t^2
        let t = QS::monomial(Var::T, 1, Rational::one(), 3);
        let repl = t
            .checked_mul(&one_minus_t(3).checked_inv().unwrap())
            .unwrap();
        let f = one_plus_t(3).pow(2);
        let sub = f.substitute(&repl).unwrap();
        assert_eq!(sub.coeff(0).unwrap(), Rational::one());
        assert_eq!(sub.coeff(1).unwrap(), Rational::from_int(2));
        assert_eq!(sub.coeff(2).unwrap(), Rational::from_int(3));
        // substitute(a, t) = a
        let ident = QS::monomial(Var::T, 1, Rational::one(), 3);
        assert_eq!(f.substitute(&ident).unwrap(), f);
    }

    fn one_minus_t(ord: i64) -> QS {
        QS::from_terms(Var::T, &[(0, Rational::one()), (1, -Rational::one())], ord)
    }

    fn one_plus_t(ord: i64) -> QS {
        QS::from_terms(Var::T, &[(0, Rational::one()), (1, Rational::one())], ord)
    }

    #[test]
    fn residue_examples() {
        let inv_y = QS::monomial(Var::Y, -1, Rational::one(), 3);
        assert_eq!(inv_y.residue().unwrap(), Rational::one());

        let a = MultiPoly::var(PolyVar::A);
        let s = PS::from_terms(
            Var::Y,
            &[(-3, a.clone()), (-1, MultiPoly::constant(Rational::from_int(3)))],
            2,
        );
        assert_eq!(
            s.residue().unwrap(),
            MultiPoly::constant(Rational::from_int(3))
        );

        // residue of -A^2 / (4 y^2 sinh(Ay)) = A^3/24
        let ay = PS::monomial(Var::Y, 1, a.clone(), 6);
        let sinh = ay.checked_sinh().unwrap();
        let num = PS::monomial(Var::Y, -2, a.pow(2).scale(&q(-1, 4)), 6);
        let res = num
            .checked_mul(&sinh.checked_inv().unwrap())
            .unwrap()
            .residue()
            .unwrap();
        assert_eq!(res, a.pow(3).scale(&q(1, 24)));
    }

    #[test]
    fn residue_unavailable_is_an_error_not_zero() {
        let s = QS::monomial(Var::Y, -3, Rational::one(), -2);
        match s.residue() {
            Err(Error::InsufficientPrecision {
                requested, achieved, ..
            }) => {
                assert_eq!(requested, -1);
                assert_eq!(achieved, -2);
            }
            other => panic!("expected insufficient precision, got {other:?}"),
        }
    }

    #[test]
    fn residue_of_derivative_vanishes() {
        let s = QS::from_terms(
            Var::Y,
            &[(-3, q(2, 5)), (-1, q(7, 2)), (0, Rational::one()), (4, q(-1, 3))],
            7,
        );
        assert_eq!(s.deriv().residue().unwrap(), Rational::zero());
    }

    #[test]
    fn variable_mismatch_is_an_error() {
        let y = QS::monomial(Var::Y, 1, Rational::one(), 4);
        let t = QS::monomial(Var::T, 1, Rational::one(), 4);
        assert!(matches!(
            y.checked_mul(&t),
            Err(Error::RingMismatch { .. })
        ));
    }

    #[test]
    fn laurent_div_assembles_coth_products_without_poles() {
        // u - y coth(q/2) with q = -Ay: assembled as
        // (u sinh(q/2) - y cosh(q/2)) / sinh(q/2) over coefficients in u.
        // Here we just check laurent_div tracks the principal part.
        let a = MultiPoly::var(PolyVar::A);
        let half = PS::monomial(Var::Y, 1, a.scale(&q(-1, 2)), 7);
        let sinh = half.checked_sinh().unwrap();
        let cosh = half.checked_cosh().unwrap();
        let y = PS::monomial(Var::Y, 1, MultiPoly::one(), 7);
        let ycosh = y.checked_mul(&cosh).unwrap();
        let d = laurent_div(&ycosh, &sinh).unwrap();
        // y cosh(q/2)/sinh(q/2) = y coth(-Ay/2): constant term -2/A
        let c0 = d.coeff(0).unwrap();
        assert_eq!(
            c0,
            MultiPoly::monomial(PolyVar::A, -1, Rational::from_int(-2))
        );
    }
}
