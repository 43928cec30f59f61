//! Exact polynomials in X and Z with the weighted degree deg Z = 1,
//! deg X = 2.

use std::collections::BTreeMap;
use std::fmt;

use crate::exactalg::{factorial, Rational};

/// Sparse bivariate polynomial over the rationals. Keys are (X-exponent,
/// Z-exponent); no stored zero coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct BivarPoly {
    terms: BTreeMap<(u32, u32), Rational>,
}

impl BivarPoly {
    pub fn zero() -> Self {
        BivarPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert((0, 0), c);
        }
        p
    }

    pub fn var_x() -> Self {
        Self::term(1, 0, Rational::one())
    }

    pub fn var_z() -> Self {
        Self::term(0, 1, Rational::one())
    }

    pub fn term(xe: u32, ze: u32, c: Rational) -> Self {
        let mut p = Self::zero();
        if !c.is_zero() {
            p.terms.insert((xe, ze), c);
        }
        p
    }

    /// a + b*X + c*Z.
    pub fn affine(a: Rational, b: Rational, c: Rational) -> Self {
        Self::constant(a)
            .add(&Self::term(1, 0, b))
            .add(&Self::term(0, 1, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
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
        BivarPoly {
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        let mut acc: BTreeMap<(u32, u32), Rational> = BTreeMap::new();
        for ((xa, za), ca) in &self.terms {
            for ((xb, zb), cb) in &rhs.terms {
                let e = (xa + xb, za + zb);
                let prod = ca * cb;
                match acc.get_mut(&e) {
                    Some(v) => *v += prod,
                    None => {
                        acc.insert(e, prod);
                    }
                }
            }
        }
        acc.retain(|_, v| !v.is_zero());
        BivarPoly { terms: acc }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BivarPoly {
            terms: self.terms.iter().map(|(e, v)| (*e, v * c)).collect(),
        }
    }

    pub fn eval(&self, x: &Rational, z: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for ((xe, ze), c) in &self.terms {
            let xp = x.pow(*xe as i64).expect("nonneg power");
            let zp = z.pow(*ze as i64).expect("nonneg power");
            acc += c * &(xp * zp);
        }
        acc
    }

    pub fn eval_int(&self, x: i64, z: i64) -> Rational {
        self.eval(&Rational::from_int(x), &Rational::from_int(z))
    }

    /// Substitute X -> X + dx, Z -> Z + dz.
    pub fn shift(&self, dx: i64, dz: i64) -> Self {
        let max_x = self.terms.keys().map(|e| e.0).max().unwrap_or(0);
        let max_z = self.terms.keys().map(|e| e.1).max().unwrap_or(0);
        let xs = power_table(
            &Self::affine(Rational::from_int(dx), Rational::one(), Rational::zero()),
            max_x,
        );
        let zs = power_table(
            &Self::affine(Rational::from_int(dz), Rational::zero(), Rational::one()),
            max_z,
        );
        let mut out = Self::zero();
        for ((xe, ze), c) in &self.terms {
            out = out.add(&xs[*xe as usize].mul(&zs[*ze as usize]).scale(c));
        }
        out
    }

    /// Weighted degree with deg Z = 1, deg X = 2; None for the zero poly.
    pub fn weighted_degree(&self) -> Option<u32> {
        self.terms.keys().map(|(x, z)| 2 * x + z).max()
    }

    pub fn coeff(&self, xe: u32, ze: u32) -> Rational {
        self.terms
            .get(&(xe, ze))
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn iter_terms(&self) -> impl Iterator<Item = (&(u32, u32), &Rational)> {
        self.terms.iter()
    }
}

fn power_table(p: &BivarPoly, max: u32) -> Vec<BivarPoly> {
    let mut out = Vec::with_capacity(max as usize + 1);
    out.push(BivarPoly::one());
    for _ in 0..max {
        out.push(out.last().unwrap().mul(p));
    }
    out
}

/// Falling-factorial binomial of an affine (or any) polynomial argument:
/// w(w-1)...(w-j+1)/j!.
pub fn binom_poly(w: &BivarPoly, j: i64) -> BivarPoly {
    if j < 0 {
        return BivarPoly::zero();
    }
    let mut acc = BivarPoly::one();
    for t in 0..j {
        acc = acc.mul(&w.sub(&BivarPoly::constant(Rational::from_int(t))));
    }
    acc.scale(&factorial(j).recip().expect("j! > 0"))
}

impl fmt::Display for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((xe, ze), c) in &self.terms {
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
            let mut mono = String::new();
            if *xe > 0 {
                mono.push_str(&if *xe == 1 {
                    "X".to_string()
                } else {
                    format!("X^{}", xe)
                });
            }
            if *ze > 0 {
                if !mono.is_empty() {
                    mono.push('*');
                }
                mono.push_str(&if *ze == 1 {
                    "Z".to_string()
                } else {
                    format!("Z^{}", ze)
                });
            }
            if mono.is_empty() {
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

impl fmt::Debug for BivarPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}
