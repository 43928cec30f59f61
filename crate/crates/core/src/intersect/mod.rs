//! Intersection-number engines: the stable-bundle moduli (two independent
//! residue backends), equivariant integrals over the Higgs moduli, three
//! independent routes to intersection numbers on the divisor at infinity,
//! and monomial extraction in the classes alpha, beta, gamma, eta.

mod stable;
mod zengine;

pub use stable::{integrate_n, integrate_n_zagier};
pub use zengine::{
    equivariant_integral_m, equivariant_integral_m_parts, integrate_z_kalkman, integrate_z_split,
    integrate_z_topdefect, monomial_z, EquivariantParts,
};

use crate::error::{Error, Result};
use crate::exactalg::{binom, factorial, MultiPoly, Rational, Ring};

/// An even polynomial in y with coefficients in Q[A,G], optionally carrying
/// a power of the equivariant class channel u. Role T (degree-zero
/// insertion) may use the u channel; role Q (degree-two insertion) must be
/// divisible by y^2 and u-free.
#[derive(Debug, Clone, PartialEq)]
pub struct WittenPoly {
    u_pow: i64,
    /// ascending even y-exponents with nonzero coefficients
    terms: Vec<(i64, MultiPoly)>,
}

impl WittenPoly {
    pub fn new(terms: Vec<(i64, MultiPoly)>) -> Result<Self> {
        for (e, _) in &terms {
            if *e < 0 || *e % 2 != 0 {
                return Err(Error::InvalidArgument(format!(
                    "Witten polynomials are even in y; found exponent {e}"
                )));
            }
        }
        let mut terms: Vec<(i64, MultiPoly)> =
            terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
        terms.sort_by_key(|(e, _)| *e);
        Ok(WittenPoly { u_pow: 0, terms })
    }

    pub fn one() -> Self {
        WittenPoly {
            u_pow: 0,
            terms: vec![(0, MultiPoly::one())],
        }
    }

    pub fn zero() -> Self {
        WittenPoly {
            u_pow: 0,
            terms: Vec::new(),
        }
    }

    /// y^{2q}  (a beta-type insertion in the T channel).
    pub fn y_even_pow(two_q: i64) -> Result<Self> {
        Self::new(vec![(two_q, MultiPoly::one())])
    }

    /// Attach a u-power (an eta-type insertion in the T channel).
    pub fn with_u_pow(mut self, p: i64) -> Result<Self> {
        if p < 0 {
            return Err(Error::InvalidArgument("u-power must be nonnegative".into()));
        }
        self.u_pow = p;
        Ok(self)
    }

    /// The canonical degree-two insertion Q = -A y^2/2 - G y^4/4 whose A- and
    /// G-derivatives generate every class in alpha, beta, gamma.
    pub fn canonical_q() -> Self {
        use crate::exactalg::PolyVar;
        WittenPoly {
            u_pow: 0,
            terms: vec![
                (2, MultiPoly::monomial(PolyVar::A, 1, Rational::new(-1, 2))),
                (4, MultiPoly::monomial(PolyVar::G, 1, Rational::new(-1, 4))),
            ],
        }
    }

    /// The quadratic-only insertion Q = -A y^2/2.
    pub fn quadratic_q() -> Self {
        use crate::exactalg::PolyVar;
        WittenPoly {
            u_pow: 0,
            terms: vec![(2, MultiPoly::monomial(PolyVar::A, 1, Rational::new(-1, 2)))],
        }
    }

    pub fn u_pow(&self) -> i64 {
        self.u_pow
    }

    pub fn y_degree(&self) -> i64 {
        self.terms.last().map(|(e, _)| *e).unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Minimum y-exponent (0 for the zero polynomial).
    pub fn y_valuation(&self) -> i64 {
        self.terms.first().map(|(e, _)| *e).unwrap_or(0)
    }

    fn require_q_role(&self) -> Result<()> {
        if self.u_pow != 0 {
            return Err(Error::InvalidArgument(
                "a degree-two insertion cannot carry the u channel".into(),
            ));
        }
        if self.is_zero() || self.y_valuation() < 2 {
            return Err(Error::InvalidArgument(
                "degree-two insertions must be nonzero and divisible by y^2".into(),
            ));
        }
        Ok(())
    }

    fn require_u_free(&self) -> Result<()> {
        if self.u_pow != 0 {
            return Err(Error::InvalidArgument(
                "this integral has no equivariant channel; T must be u-free".into(),
            ));
        }
        Ok(())
    }

    /// dT/dy as (exponent, coefficient) pairs.
    fn derivative_terms(&self) -> Vec<(i64, MultiPoly)> {
        self.terms
            .iter()
            .filter(|(e, _)| *e > 0)
            .map(|(e, c)| (*e - 1, c.scale(&Rational::from_int(*e))))
            .collect()
    }

    fn second_derivative_terms(&self) -> Vec<(i64, MultiPoly)> {
        self.terms
            .iter()
            .filter(|(e, _)| *e > 1)
            .map(|(e, c)| (*e - 2, c.scale(&Rational::from_int(e * (e - 1)))))
            .collect()
    }

    /// Evaluate with the given embeddings of y and u. `lift` injects the
    /// base coefficients into the target ring.
    pub fn embed<R: Ring>(&self, lift: &dyn Fn(&MultiPoly) -> R, y: &R, u: &R) -> R {
        let base = embed_terms(&self.terms, lift, y);
        if self.u_pow > 0 {
            base.mul(&u.pow(self.u_pow as u32))
        } else {
            base
        }
    }
}

/// Evaluate a (y-exponent, coefficient) list at an embedded y.
pub(crate) fn embed_terms<R: Ring>(
    terms: &[(i64, MultiPoly)],
    lift: &dyn Fn(&MultiPoly) -> R,
    y: &R,
) -> R {
    let mut acc: Option<R> = None;
    for (e, c) in terms {
        let t = lift(c).mul(&y.pow(*e as u32));
        acc = Some(match acc {
            None => t,
            Some(a) => a.add(&t),
        });
    }
    acc.unwrap_or_else(|| lift(&MultiPoly::zero()))
}

/// Embeddings of Q' and Q'' for a degree-two insertion.
pub(crate) fn embed_q_derivs<R: Ring>(
    q: &WittenPoly,
    lift: &dyn Fn(&MultiPoly) -> R,
    y: &R,
) -> (R, R) {
    (
        embed_terms(&q.derivative_terms(), lift, y),
        embed_terms(&q.second_derivative_terms(), lift, y),
    )
}

/// Q'/2 terms, used by the tanh/cosh factors.
pub(crate) fn embed_half_q_deriv<R: Ring>(
    q: &WittenPoly,
    lift: &dyn Fn(&MultiPoly) -> R,
    y: &R,
) -> R {
    let halved: Vec<(i64, MultiPoly)> = q
        .derivative_terms()
        .into_iter()
        .map(|(e, c)| (e, c.scale(&Rational::new(1, 2))))
        .collect();
    embed_terms(&halved, lift, y)
}

/// A monomial alpha^i beta^m (4 gamma)^j eta^n in the divisor classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MonomialClass {
    /// exponent of alpha
    pub i: i64,
    /// exponent of beta
    pub m: i64,
    /// exponent of 4*gamma
    pub j: i64,
    /// exponent of eta
    pub n: i64,
}

impl MonomialClass {
    pub fn new(i: i64, m: i64, j: i64, n: i64) -> Result<Self> {
        if i < 0 || m < 0 || j < 0 || n < 0 {
            return Err(Error::InvalidArgument(
                "class exponents must be nonnegative".into(),
            ));
        }
        Ok(MonomialClass { i, m, j, n })
    }

    /// def(alpha) = 0, def(beta) = def(gamma) = def(eta) = 2.
    pub fn defect(&self) -> i64 {
        2 * (self.m + self.j + self.n)
    }

    /// Cohomological degree 2i + 4m + 6j + 2n.
    pub fn degree(&self) -> i64 {
        2 * self.i + 4 * self.m + 6 * self.j + 2 * self.n
    }
}

/// The genus/window pair with the residue-formula precondition
/// 1 <= k <= g-1 enforced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenusWindow {
    pub g: i64,
    pub k: i64,
}

impl GenusWindow {
    pub fn new(g: i64, k: i64) -> Result<Self> {
        if g < 2 {
            return Err(Error::InvalidArgument(format!("genus {g} < 2")));
        }
        if !(1..=g - 1).contains(&k) {
            return Err(Error::InvalidArgument(format!(
                "window index k = {k} outside 1 <= k <= g-1 = {}",
                g - 1
            )));
        }
        Ok(GenusWindow { g, k })
    }
}

/// Closed form of the raw top-defect pairing integral for the F/P basis:
/// (-1)^{a1+a2+1} 2^{a1+a2-g} (3g-3-a1-a2-n1-n2)! (n1+n2)! C(g, n1+n2),
/// with the vanishing convention on negative arguments. The value is
/// independent of k.
pub fn closed_form_pairing(g: i64, a1: i64, n1: i64, a2: i64, n2: i64) -> Rational {
    let f1 = factorial(3 * g - 3 - a1 - a2 - n1 - n2);
    if f1.is_zero() {
        return Rational::zero();
    }
    let b = binom(g, n1 + n2);
    if b.is_zero() {
        return Rational::zero();
    }
    let sign = Rational::neg_one_pow(a1 + a2 + 1);
    let two_pow = Rational::from_int(2).pow(a1 + a2 - g).expect("2 invertible");
    sign * two_pow * f1 * factorial(n1 + n2) * b
}

/// Coefficient ring for the equivariant tower: Q[A,G]-polynomials worked
/// in the quotient by total (A,G)-degree > cap. Capping is a genuine ring
/// quotient only while every value stays polynomial in A and G, which the
/// Kalkman-route towers do; construction enforces it.
#[derive(Debug, Clone, PartialEq)]
pub struct Capped {
    pub poly: MultiPoly,
    cap: i32,
}

pub(crate) const NO_CAP: i32 = i32::MAX;

impl Capped {
    pub fn new(poly: MultiPoly, cap: i32) -> Self {
        use crate::exactalg::PolyVar;
        let poly = if cap == NO_CAP {
            poly
        } else {
            let t = poly.truncate_degree_in(&[PolyVar::A, PolyVar::G], cap);
            assert!(
                t.iter_terms().all(|(e, _)| {
                    e[PolyVar::A as usize] >= 0 && e[PolyVar::G as usize] >= 0
                }),
                "degree cap applied to a non-polynomial value; the quotient would be unsound"
            );
            t
        };
        Capped { poly, cap }
    }

    fn join(&self, rhs: &Self) -> i32 {
        self.cap.min(rhs.cap)
    }
}

impl std::fmt::Display for Capped {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.poly)
    }
}

impl Ring for Capped {
    fn zero() -> Self {
        Capped {
            poly: MultiPoly::zero(),
            cap: NO_CAP,
        }
    }
    fn one() -> Self {
        Capped {
            poly: MultiPoly::one(),
            cap: NO_CAP,
        }
    }
    fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }
    fn add(&self, rhs: &Self) -> Self {
        Capped::new(self.poly.add(&rhs.poly), self.join(rhs))
    }
    fn sub(&self, rhs: &Self) -> Self {
        Capped::new(self.poly.sub(&rhs.poly), self.join(rhs))
    }
    fn mul(&self, rhs: &Self) -> Self {
        Capped::new(self.poly.mul(&rhs.poly), self.join(rhs))
    }
    fn neg(&self) -> Self {
        Capped {
            poly: self.poly.neg(),
            cap: self.cap,
        }
    }
    fn scale(&self, q: &Rational) -> Self {
        Capped {
            poly: self.poly.scale(q),
            cap: self.cap,
        }
    }
    fn try_inv(&self) -> Result<Self> {
        Ok(Capped::new(self.poly.try_inv()?, self.cap))
    }
    fn try_exp(&self) -> Result<Self> {
        if self.poly.is_zero() {
            Ok(Self::one())
        } else {
            Err(Error::InvalidArgument(
                "exp of a nonzero polynomial is not exact".into(),
            ))
        }
    }
}
