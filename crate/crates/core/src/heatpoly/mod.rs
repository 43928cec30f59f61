//! The discrete-heat polynomial family p_k(X,Z), finite-difference
//! operators, vanishing-grid checks, the determinant families W_{k,h} and
//! B_{k,h}, the h=1 positivity machinery, and the determinantal scans.
//!
//! p_k(X,Z) is the coefficient of t^k in K(X,Z;t) = (1+t)^{Z-2X} (1+2t)^X,
//! equivalently sum_i 2^i C(X,i) C(Z-2X,k-i) with polynomial binomials.
//! Every p_k satisfies the discrete heat equation D_{Z,-1}^2 p = -D_X p and
//! vanishes on the grid Gamma_k = {X >= 0, 2X <= Z <= X+k-1}.

pub mod bivar;

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

pub use bivar::{binom_poly, BivarPoly};

use crate::exactalg::Rational;
use crate::pwmatrix::linalg;

/// p_k(X,Z), exact; p_0 = 1, p_k = 0 for k < 0. Memoized: the scans hit the
/// same k many times and the cache is read-only after warm-up.
pub fn pk(k: i64) -> Arc<BivarPoly> {
    static CACHE: OnceLock<Mutex<HashMap<i64, Arc<BivarPoly>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(p) = cache.lock().unwrap().get(&k) {
        return p.clone();
    }
    let p = Arc::new(pk_uncached(k));
    cache.lock().unwrap().insert(k, p.clone());
    p
}

fn pk_uncached(k: i64) -> BivarPoly {
    if k < 0 {
        return BivarPoly::zero();
    }
    let x = BivarPoly::var_x();
    // Z - 2X
    let z2x = BivarPoly::var_z().sub(&x.scale(&Rational::from_int(2)));
    let mut acc = BivarPoly::zero();
    for i in 0..=k {
        let c = binom_poly(&x, i)
            .mul(&binom_poly(&z2x, k - i))
            .scale(&Rational::from_int(2).pow(i).expect("nonneg"));
        acc = acc.add(&c);
    }
    acc
}

/// The alternate residue form: coefficient of t^k in (1+t)^X (1-t)^{X-Z+k-1}.
pub fn pk_alt_form(k: i64) -> BivarPoly {
    if k < 0 {
        return BivarPoly::zero();
    }
    let x = BivarPoly::var_x();
    let w = x
        .sub(&BivarPoly::var_z())
        .add(&BivarPoly::constant(Rational::from_int(k - 1)));
    let mut acc = BivarPoly::zero();
    for i in 0..=k {
        let sign = Rational::neg_one_pow(k - i);
        acc = acc.add(&binom_poly(&x, i).mul(&binom_poly(&w, k - i)).scale(&sign));
    }
    acc
}

/// True iff both residue forms give the same polynomial.
pub fn pk_alt_forms_agree(k: i64) -> bool {
    *pk(k) == pk_alt_form(k)
}

/// Finite-difference operators.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiffOp {
    /// f(Z+1) - f(Z)
    DZ,
    /// f(X+1) - f(X)
    DX,
    /// f(Z-1) - f(Z)
    DZMinus,
    /// f(X-1) - f(X)
    DXMinus,
}

pub fn diff(p: &BivarPoly, op: DiffOp) -> BivarPoly {
    let shifted = match op {
        DiffOp::DZ => p.shift(0, 1),
        DiffOp::DX => p.shift(1, 0),
        DiffOp::DZMinus => p.shift(0, -1),
        DiffOp::DXMinus => p.shift(-1, 0),
    };
    shifted.sub(p)
}

/// D_{Z,-1}^2 p_k = -D_X p_k, exactly.
pub fn heat_equation_holds(k: i64) -> bool {
    let p = pk(k);
    let lhs = diff(&diff(&p, DiffOp::DZMinus), DiffOp::DZMinus);
    let rhs = diff(&p, DiffOp::DX).neg();
    lhs == rhs
}

/// D_Z p_k = p_{k-1}, exactly.
pub fn dz_lowers_index(k: i64) -> bool {
    diff(&pk(k), DiffOp::DZ) == *pk(k - 1)
}

/// Integer points of Gamma_k = {X >= 0, 2X <= Z <= X+k-1}; X <= k-1 is
/// forced, so the grid is finite.
pub fn gamma_points(k: i64) -> Vec<(i64, i64)> {
    let mut pts = Vec::new();
    for x in 0..k {
        for z in 2 * x..=x + k - 1 {
            pts.push((x, z));
        }
    }
    pts
}

/// True iff p_k vanishes at every point of Gamma_k.
pub fn gamma_vanish(k: i64) -> bool {
    let p = pk(k);
    gamma_points(k)
        .into_iter()
        .all(|(x, z)| p.eval_int(x, z).is_zero())
}

/// The three recurrences from the h=1 positivity proof, as exact
/// polynomial identities:
///   (k+1) p_{k+1}(X,Z) = X p_k(X-1,Z-2) + (Z-X-k) p_k(X,Z)
///   p_k(X-1,Z) = p_{k-1}(X-2,Z-2) + p_k(X-2,Z-1)
///   p_k(X,Z) = p_k(X,Z-1) + p_{k-1}(X,Z-1)
pub fn pk_identities_hold(k: i64) -> bool {
    assert!(k >= 1);
    let p = pk(k);
    let pm1 = pk(k - 1);
    let pp1 = pk(k + 1);
    let x = BivarPoly::var_x();
    let z = BivarPoly::var_z();

    let lhs1 = pp1.scale(&Rational::from_int(k + 1));
    let rhs1 = x.mul(&p.shift(-1, -2)).add(
        &z.sub(&x)
            .sub(&BivarPoly::constant(Rational::from_int(k)))
            .mul(&p),
    );

    let lhs2 = p.shift(-1, 0);
    let rhs2 = pm1.shift(-2, -2).add(&p.shift(-2, -1));

    let lhs3 = (*p).clone();
    let rhs3 = p.shift(0, -1).add(&pm1.shift(0, -1));

    lhs1 == rhs1 && lhs2 == rhs2 && lhs3 == rhs3
}

/// Newton reconstruction around (x0, z0) = (g, 3g-k-2):
/// sum_{l+2n<=k} (-1)^l [D_Z^l D_{X,-1}^n p_k](x0,z0)
///              C(z0-1+l-Z, l) C(x0-X, n)  =  p_k(X,Z).
pub fn newton_reconstructs(k: i64, g: i64) -> bool {
    let x0 = g;
    let z0 = 3 * g - k - 2;
    let p = pk(k);
    let mut acc = BivarPoly::zero();
    for n in 0..=(k / 2) {
        // apply D_{X,-1}^n once per n, then D_Z^l incrementally
        let mut q = (*p).clone();
        for _ in 0..n {
            q = diff(&q, DiffOp::DXMinus);
        }
        let mut l = 0;
        loop {
            if l + 2 * n > k {
                break;
            }
            let val = q.eval_int(x0, z0);
            if !val.is_zero() {
                let zfac = binom_poly(
                    &BivarPoly::affine(
                        Rational::from_int(z0 - 1 + l),
                        Rational::zero(),
                        -Rational::one(),
                    ),
                    l,
                );
                let xfac = binom_poly(
                    &BivarPoly::affine(Rational::from_int(x0), -Rational::one(), Rational::zero()),
                    n,
                );
                let sign = Rational::neg_one_pow(l);
                acc = acc.add(&zfac.mul(&xfac).scale(&(val * sign)));
            }
            q = diff(&q, DiffOp::DZ);
            l += 1;
        }
    }
    acc == *p
}

/// The kernel-basis polynomials Z^j p_{k+h-i}(X,Z) for 0 <= j <= i <= h,
/// in ascending lexicographic (i, j) order.
pub fn kernel_basis_polys(k: i64, h: i64) -> Vec<BivarPoly> {
    let mut out = Vec::new();
    for i in 0..=h {
        for j in 0..=i {
            let mut q = (*pk(k + h - i)).clone();
            for _ in 0..j {
                q = q.mul(&BivarPoly::var_z());
            }
            out.push(q);
        }
    }
    out
}

/// The evaluation matrix certifying independence of the kernel basis:
/// rows (i,j) with 0<=j<=i<=h carry C(Z-h-k+j, j) p_{k+h-i}(X,Z), columns
/// (a,b) with 0<=a<=b<=h are the evaluation points (h-b, h+k-b+a). Up to
/// rearrangement it is triangular with powers of two on the diagonal.
pub fn th_matrix(k: i64, h: i64) -> Vec<Vec<Rational>> {
    let mut rows = Vec::new();
    for i in 0..=h {
        for j in 0..=i {
            let zarg = BivarPoly::affine(
                Rational::from_int(-h - k + j),
                Rational::zero(),
                Rational::one(),
            );
            let poly = binom_poly(&zarg, j).mul(&pk(k + h - i));
            let mut row = Vec::new();
            for b in 0..=h {
                for a in 0..=b {
                    row.push(poly.eval_int(h - b, h + k - b + a));
                }
            }
            rows.push(row);
        }
    }
    rows
}

/// Certificate that the (h+1)(h+2)/2 kernel polynomials are independent.
pub fn kernel_basis_independent(k: i64, h: i64) -> bool {
    !linalg::det(&th_matrix(k, h)).is_zero()
}

/// W_{k,h}(X,Z) = det( p_{k-2i+j}(X-h, Z-2i) )_{0<=i,j<=h} as an exact
/// polynomial. This is the determinant whose h=1 specialization decomposes
/// as W⁰ - W¹ below; the 1x1 case is p_k itself.
pub fn w_det(k: i64, h: i64) -> BivarPoly {
    let n = (h + 1) as usize;
    let entries: Vec<Vec<BivarPoly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| pk(k - 2 * (i as i64) + j as i64).shift(-h, -2 * (i as i64)))
                .collect()
        })
        .collect();
    poly_det(&entries)
}

/// Division-free determinant by expansion in minors; fine for the h <= 4
/// sizes used here.
fn poly_det(m: &[Vec<BivarPoly>]) -> BivarPoly {
    let n = m.len();
    if n == 0 {
        return BivarPoly::one();
    }
    if n == 1 {
        return m[0][0].clone();
    }
    let mut acc = BivarPoly::zero();
    for (j, top) in m[0].iter().enumerate() {
        if top.is_zero() {
            continue;
        }
        let minor: Vec<Vec<BivarPoly>> = (1..n)
            .map(|i| {
                (0..n)
                    .filter(|&c| c != j)
                    .map(|c| m[i][c].clone())
                    .collect()
            })
            .collect();
        let term = top.mul(&poly_det(&minor));
        acc = if j % 2 == 0 {
            acc.add(&term)
        } else {
            acc.sub(&term)
        };
    }
    acc
}

/// W_{k,h} evaluated at a point, via a numeric determinant; used by the
/// scans where the full polynomial is never needed.
pub fn w_eval(k: i64, h: i64, x: i64, z: i64) -> Rational {
    let n = (h + 1) as usize;
    let m: Vec<Vec<Rational>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| pk(k - 2 * (i as i64) + j as i64).eval_int(x - h, z - 2 * (i as i64)))
                .collect()
        })
        .collect();
    linalg::det(&m)
}

/// The two Vandermonde pieces of W_{k,1}:
/// W⁰ = p_k(X-1,Z) p_{k-1}(X-1,Z-2), W¹ = p_{k+1}(X-1,Z) p_{k-2}(X-1,Z-2).
pub fn w01(k: i64) -> (BivarPoly, BivarPoly) {
    let w0 = pk(k).shift(-1, 0).mul(&pk(k - 1).shift(-1, -2));
    let w1 = pk(k + 1).shift(-1, 0).mul(&pk(k - 2).shift(-1, -2));
    (w0, w1)
}

/// (k-1) W⁰_{k,1} - (k+1) W¹_{k,1} = 2 (X-1) W_{k-1,1}(X-1, Z-2), exactly.
pub fn h1_recurrence_holds(k: i64) -> bool {
    assert!(k >= 2);
    let (w0, w1) = w01(k);
    let lhs = w0
        .scale(&Rational::from_int(k - 1))
        .sub(&w1.scale(&Rational::from_int(k + 1)));
    let xm1 = BivarPoly::affine(-Rational::one(), Rational::one(), Rational::zero());
    let rhs = xm1
        .mul(&w_det(k - 1, 1).shift(-1, -2))
        .scale(&Rational::from_int(2));
    lhs == rhs
}

/// One row of a positivity scan.
#[derive(Debug, Clone)]
pub struct ScanEntry {
    pub k: i64,
    pub h: i64,
    pub g: i64,
    pub value: Rational,
    pub sign: i32,
}

/// Exact evaluations of W_{k,h}(g, 3g-k-h-2) over the grid k <= k_max,
/// h <= min(h_max, k), g in g_range with g >= k+1. Never rounds.
pub fn positivity_scan(
    k_max: i64,
    h_max: i64,
    g_range: std::ops::RangeInclusive<i64>,
) -> Vec<ScanEntry> {
    let mut out = Vec::new();
    for k in 1..=k_max {
        for h in 0..=h_max.min(k) {
            for g in g_range.clone() {
                if g < k + 1 {
                    continue;
                }
                let value = w_eval(k, h, g, 3 * g - k - h - 2);
                let sign = value.signum();
                out.push(ScanEntry {
                    k,
                    h,
                    g,
                    value,
                    sign,
                });
            }
        }
    }
    out
}

/// B_{k,h}(X,Z): rows (i,j) with 0<=j<=i<=h carry the kernel polynomial
/// Z^j p_{k+h-i}, columns (n,m) with 0<=n<=m<=h evaluate it at
/// (X-n, Z-m). Row and column order is ascending lexicographic.
pub fn b_matrix_eval(k: i64, h: i64, x: i64, z: i64) -> Vec<Vec<Rational>> {
    let polys = kernel_basis_polys(k, h);
    polys
        .iter()
        .map(|q| {
            let mut row = Vec::new();
            for m in 0..=h {
                for n in 0..=m {
                    row.push(q.eval_int(x - n, z - m));
                }
            }
            row
        })
        .collect()
}

/// Report of the determinant relations
/// det Q~_{k,h}(g,3g-3) = c_{k,h} det B_{k,h}(g,3g-2-k)
///                      = c'_{k,h} prod_i W_{k,i}(g,3g-k-i-2)
/// checked by constancy of both ratios across the sampled g.
#[derive(Debug, Clone)]
pub struct DetRelationReport {
    pub k: i64,
    pub h: i64,
    pub samples: Vec<DetRelationSample>,
    pub ratio_b_constant: bool,
    pub ratio_w_constant: bool,
}

#[derive(Debug, Clone)]
pub struct DetRelationSample {
    pub g: i64,
    pub det_qtilde: Rational,
    pub det_b: Rational,
    pub prod_w: Rational,
    /// det_qtilde / det_b where defined
    pub ratio_b: Option<Rational>,
    /// det_qtilde / prod_w where defined
    pub ratio_w: Option<Rational>,
}

pub fn det_tilde_q_relation(k: i64, h: i64, g_samples: &[i64]) -> DetRelationReport {
    let mut samples = Vec::new();
    for &g in g_samples {
        let det_qtilde = crate::pwmatrix::det_qtilde(g, k, h);
        let det_b = linalg::det(&b_matrix_eval(k, h, g, 3 * g - 2 - k));
        let mut prod_w = Rational::one();
        for i in 0..=h {
            prod_w *= w_eval(k, i, g, 3 * g - k - i - 2);
        }
        let ratio_b = if det_b.is_zero() {
            None
        } else {
            Some(det_qtilde.clone() / det_b.clone())
        };
        let ratio_w = if prod_w.is_zero() {
            None
        } else {
            Some(det_qtilde.clone() / prod_w.clone())
        };
        samples.push(DetRelationSample {
            g,
            det_qtilde,
            det_b,
            prod_w,
            ratio_b,
            ratio_w,
        });
    }
    let constant = |get: fn(&DetRelationSample) -> Option<Rational>| {
        let vals: Vec<Rational> = samples.iter().filter_map(get).collect();
        vals.len() == samples.len() && vals.windows(2).all(|w| w[0] == w[1])
    };
    DetRelationReport {
        k,
        h,
        ratio_b_constant: constant(|s| s.ratio_b.clone()),
        ratio_w_constant: constant(|s| s.ratio_w.clone()),
        samples,
    }
}

/// Exact dimension of the space of weighted-degree <= k polynomials
/// vanishing on Gamma_k, by exact linear algebra on the evaluation system.
pub fn vanishing_space_dimension(k: i64) -> usize {
    // monomials X^a Z^b with 2a + b <= k
    let mut monos = Vec::new();
    for a in 0..=(k / 2) {
        for b in 0..=(k - 2 * a) {
            monos.push((a as u32, b as u32));
        }
    }
    let rows: Vec<Vec<Rational>> = gamma_points(k)
        .into_iter()
        .map(|(x, z)| {
            monos
                .iter()
                .map(|&(a, b)| BivarPoly::term(a, b, Rational::one()).eval_int(x, z))
                .collect()
        })
        .collect();
    linalg::kernel_basis(&rows).len()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p1_is_z() {
        assert_eq!(*pk(1), BivarPoly::var_z());
    }

    #[test]
    fn initial_condition_binom_z_k() {
        // p_k(0, Z) = C(Z, k) as a polynomial identity: the difference must
        // be divisible by X.
        for k in 0..=8 {
            let expect = binom_poly(&BivarPoly::var_z(), k);
            let diff_poly = pk(k).sub(&expect);
            // every term of the difference must carry a positive X power
            assert!(
                diff_poly.iter_terms().all(|((xe, _), _)| *xe > 0),
                "k={k}"
            );
        }
    }

    #[test]
    fn normalizer_value() {
        // p_k(k+1, 2k+1) = 2^{k+1} - 1
        for k in 0..=10 {
            let expect = Rational::from_int(2).pow(k + 1).unwrap() - Rational::one();
            assert_eq!(pk(k).eval_int(k + 1, 2 * k + 1), expect, "k={k}");
        }
    }

    #[test]
    fn pk_vanishes_on_gamma_and_not_outside() {
        for k in 1..=8 {
            assert!(gamma_vanish(k), "k={k}");
            // just outside the grid: p_k(0, k) = 1
            assert_eq!(pk(k).eval_int(0, k), Rational::one());
        }
    }

    #[test]
    fn heat_equation() {
        for k in 0..=10 {
            assert!(heat_equation_holds(k), "k={k}");
        }
    }

    #[test]
    fn dz_relation_and_degree() {
        for k in 1..=8 {
            assert!(dz_lowers_index(k), "k={k}");
            assert_eq!(pk(k).weighted_degree(), Some(k as u32));
            let d = diff(&pk(k), DiffOp::DZ);
            assert_eq!(d.weighted_degree(), Some(k as u32 - 1));
        }
    }

    #[test]
    fn alt_form_agrees() {
        // k=2 by hand: C(Z-2X,2) + 2X(Z-2X) + 2X(X-1)
        let two_x = BivarPoly::var_x().scale(&Rational::from_int(2));
        let z2x = BivarPoly::var_z().sub(&two_x);
        let hand = binom_poly(&z2x, 2)
            .add(&two_x.mul(&z2x))
            .add(&two_x.mul(&BivarPoly::var_x().sub(&BivarPoly::one())));
        assert_eq!(*pk(2), hand);
        for k in 0..=8 {
            assert!(pk_alt_forms_agree(k), "k={k}");
        }
    }

    #[test]
    fn identities() {
        // third identity at k=1: Z = (Z-1) + 1
        for k in 1..=8 {
            assert!(pk_identities_hold(k), "k={k}");
        }
    }

    #[test]
    fn newton_reconstruction() {
        for k in 1..=6 {
            for g in (k + 1)..=(k + 3) {
                assert!(newton_reconstructs(k, g), "k={k} g={g}");
            }
        }
    }

    #[test]
    fn w_dets() {
        // W_{1,1} = Z
        assert_eq!(w_det(1, 1), BivarPoly::var_z());
        // W_{k,0} = p_k
        for k in 1..=6 {
            assert_eq!(w_det(k, 0), *pk(k));
        }
        // W_{k,1} = W0 - W1
        for k in 1..=6 {
            let (w0, w1) = w01(k);
            assert_eq!(w_det(k, 1), w0.sub(&w1), "k={k}");
        }
    }

    #[test]
    fn h1_recurrence() {
        for k in 2..=8 {
            assert!(h1_recurrence_holds(k), "k={k}");
        }
    }

    #[test]
    fn w_k1_positive_on_quoted_domain() {
        // W_{k,1}(X,Z) > 0 for X >= k, Z >= X+k-1, sampled grid
        for k in 1..=5 {
            for x in k..=(k + 3) {
                for z in (x + k - 1)..=(x + k + 3) {
                    assert!(
                        w_eval(k, 1, x, z).is_positive(),
                        "k={k} x={x} z={z}"
                    );
                }
            }
        }
    }

    #[test]
    fn kernel_count_and_independence() {
        for k in 1..=5 {
            for h in 0..=k.min(3) {
                let polys = kernel_basis_polys(k, h);
                assert_eq!(polys.len() as i64, (h + 1) * (h + 2) / 2);
                assert!(kernel_basis_independent(k, h), "k={k} h={h}");
                // each vanishes on the column grid {(n2, a2+n2): n2<=a2<=k-1}
                for q in &polys {
                    for a2 in 0..k {
                        for n2 in 0..=a2 {
                            assert!(q.eval_int(n2, a2 + n2).is_zero());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gamma_vanishing_space_is_a_line() {
        for k in 1..=6 {
            assert_eq!(vanishing_space_dimension(k), 1, "k={k}");
        }
    }
}
