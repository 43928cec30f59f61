//! Pairing matrices M_k and M_{k,h}, the factorization matrices Q_k,
//! Q_k^{-1}, S_k, S_{k,h}, exact nullspaces, the kernel vectors and
//! lowest-defect solutions, and the determinantal criterion.
//!
//! Index pairs (a, n) run over triangular sets; the canonical order is
//! ascending a+n, then ascending n, fixed once so that kernel bases and
//! reports are reproducible.

pub mod linalg;

use std::fmt;

use crate::exactalg::{binom, factorial, MultiPoly, PolyVar, Rational, Ring, Series, Var};
use crate::heatpoly;

/// A row/column label (a, n) of the pairing matrices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PairIndex {
    pub a: i64,
    pub n: i64,
}

impl PairIndex {
    pub fn new(a: i64, n: i64) -> Self {
        PairIndex { a, n }
    }

    fn key(&self) -> (i64, i64) {
        (self.a + self.n, self.n)
    }
}

impl PartialOrd for PairIndex {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PairIndex {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for PairIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.a, self.n)
    }
}

/// Exact rational matrix with labelled rows and columns.
#[derive(Debug, Clone, PartialEq)]
pub struct PairingMatrix {
    pub rows: Vec<PairIndex>,
    pub cols: Vec<PairIndex>,
    pub entries: Vec<Vec<Rational>>,
}

impl PairingMatrix {
    pub fn from_fn(
        rows: Vec<PairIndex>,
        cols: Vec<PairIndex>,
        f: impl Fn(PairIndex, PairIndex) -> Rational,
    ) -> Self {
        let entries = rows
            .iter()
            .map(|&r| cols.iter().map(|&c| f(r, c)).collect())
            .collect();
        PairingMatrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_cols(&self) -> usize {
        self.cols.len()
    }

    pub fn entry(&self, r: PairIndex, c: PairIndex) -> Option<&Rational> {
        let ri = self.rows.iter().position(|&x| x == r)?;
        let ci = self.cols.iter().position(|&x| x == c)?;
        Some(&self.entries[ri][ci])
    }

    pub fn mul(&self, rhs: &PairingMatrix) -> PairingMatrix {
        assert_eq!(self.cols, rhs.rows, "label mismatch in matrix product");
        PairingMatrix {
            rows: self.rows.clone(),
            cols: rhs.cols.clone(),
            entries: linalg::matmul(&self.entries, &rhs.entries),
        }
    }

    pub fn is_identity(&self) -> bool {
        if self.rows != self.cols {
            return false;
        }
        self.entries.iter().enumerate().all(|(i, row)| {
            row.iter().enumerate().all(|(j, e)| {
                if i == j {
                    e.is_one()
                } else {
                    e.is_zero()
                }
            })
        })
    }

    /// Basis of ker(M^T) = left kernel of M, vectors indexed by `rows`.
    pub fn left_kernel(&self) -> Vec<Vec<Rational>> {
        linalg::left_kernel_basis(&self.entries)
    }

    pub fn det(&self) -> Rational {
        assert_eq!(self.n_rows(), self.n_cols());
        linalg::det(&self.entries)
    }
}

/// Triangular set {(a,n) : 0 <= n <= a, a+n <= bound} in canonical order.
fn triangular_set(bound: i64) -> Vec<PairIndex> {
    let mut v = Vec::new();
    for a in 0..=bound {
        for n in 0..=a.min(bound - a) {
            v.push(PairIndex::new(a, n));
        }
    }
    v.sort();
    v
}

/// Column set {(a,n) : 0 <= n <= a <= k-1} in canonical order.
fn column_set(k: i64) -> Vec<PairIndex> {
    let mut v = Vec::new();
    for a in 0..k {
        for n in 0..=a {
            v.push(PairIndex::new(a, n));
        }
    }
    v.sort();
    v
}

pub fn mk_rows(k: i64) -> Vec<PairIndex> {
    triangular_set(k)
}

pub fn mk_cols(k: i64) -> Vec<PairIndex> {
    column_set(k)
}

/// Rows of M_{k,h}: {0 <= n1 <= a1 <= k-1, a1+n1 <= k+h} plus the
/// distinguished row (a1, n1) = (k, h). The a1+n1 bound is what produces
/// the closed row count r_{k,h} = c_{k,h} - floor((k-h+1)(k-h-3)/4).
pub fn mkh_rows(k: i64, h: i64) -> Vec<PairIndex> {
    let mut v: Vec<PairIndex> = column_set(k)
        .into_iter()
        .filter(|p| p.a + p.n <= k + h)
        .collect();
    v.push(PairIndex::new(k, h));
    v.sort();
    v
}

/// The closed row count r_{k,h} = c_{k,h} - floor((k-h+1)(k-h-3)/4).
pub fn mkh_row_count(k: i64, h: i64) -> i64 {
    let c = k * (k + 1) / 2;
    c - ((k - h + 1) * (k - h - 3)).div_euclid(4)
}

/// M_k entry: C(3g-3-a1-n1-a2-n2, k-a1-n1) C(g-n2, n1).
pub fn build_mk(g: i64, k: i64) -> PairingMatrix {
    assert!(g >= k + 1 && k >= 1, "need g >= k+1 >= 2");
    build_mkh_inner(g, k, 0, mk_rows(k))
}

/// M_{k,h} entry: C(3g-3-a1-n1-a2-n2, k+h-a1-n1) C(g-n2, n1).
pub fn build_mkh(g: i64, k: i64, h: i64) -> PairingMatrix {
    assert!(g >= k + 1 && (0..=k).contains(&h));
    build_mkh_inner(g, k, h, mkh_rows(k, h))
}

fn build_mkh_inner(g: i64, k: i64, h: i64, rows: Vec<PairIndex>) -> PairingMatrix {
    PairingMatrix::from_fn(rows, column_set(k), |r, c| {
        binom(3 * g - 3 - r.a - r.n - c.a - c.n, k + h - r.a - r.n) * binom(g - c.n, r.n)
    })
}

/// Elementary symmetric polynomial e_i(x_1..x_j) with the source's
/// conventions taken verbatim: e_i = 0 for i < 0 and e_i = 1 when
/// 0 <= j < i. (The unusual second clause is never exercised on the valid
/// index ranges; the factorization test is the arbiter.)
fn elem_sym(vals: &[Rational], i: i64) -> Rational {
    if i < 0 {
        return Rational::zero();
    }
    let j = vals.len() as i64;
    if j < i {
        return Rational::one();
    }
    // DP over prod (1 + x_m t), coefficient of t^i
    let mut coeffs = vec![Rational::zero(); i as usize + 1];
    coeffs[0] = Rational::one();
    for x in vals {
        for d in (1..coeffs.len()).rev() {
            let add = &coeffs[d - 1] * x;
            coeffs[d] += add;
        }
    }
    coeffs[i as usize].clone()
}

/// Complete homogeneous symmetric function h_r(x_1..x_j); h_r = 0 for r < 0.
fn complete_sym(vals: &[Rational], r: i64) -> Rational {
    if r < 0 {
        return Rational::zero();
    }
    if r == 0 {
        return Rational::one();
    }
    if vals.is_empty() {
        return Rational::zero();
    }
    // DP: h_r(x_1..x_m) = h_r(x_1..x_{m-1}) + x_m h_{r-1}(x_1..x_m)
    let mut coeffs = vec![Rational::zero(); r as usize + 1];
    coeffs[0] = Rational::one();
    for x in vals {
        for d in 1..coeffs.len() {
            let add = &coeffs[d - 1] * x;
            coeffs[d] += add;
        }
    }
    coeffs[r as usize].clone()
}

fn range_vals(from: i64, to: i64) -> Vec<Rational> {
    if from > to {
        return Vec::new();
    }
    (from..=to).map(Rational::from_int).collect()
}

/// Q_k at the evaluation point (X, Z); the default elsewhere is
/// (X, Z) = (g, 3g-3). Rows carry (a, n), columns (b, m); entry:
/// (-1)^{k+b} e_{b+m-a-n}(Z+1-k, ..., Z-a-n) e_{n-m}(X-n+1, ..., X)
///            / ((k-a-n)! n!).
///
/// The row normalization 1/((k-a-n)! n!) is forced: expanding the
/// binomial polynomials C(Z'-Z, k-a-n) C(X'-X, n) behind the pairing into
/// the monomial basis that S_k evaluates produces exactly these factorial
/// denominators, and without them M_k = Q_k S_k fails from k = 2 on. The
/// factorization identity is the arbiter here; diagonal entries become
/// (-1)^{k+a} / ((k-a-n)! n!), keeping the sign pattern and invertibility.
pub fn build_qk_at(k: i64, x: i64, z: i64) -> PairingMatrix {
    let idx = triangular_set(k);
    PairingMatrix::from_fn(idx.clone(), idx, |r, c| {
        let (a, n, b, m) = (r.a, r.n, c.a, c.n);
        let first = elem_sym(&range_vals(z + 1 - k, z - a - n), b + m - a - n);
        let second = elem_sym(&range_vals(x - n + 1, x), n - m);
        let norm = factorial(k - a - n).recip().expect("positive")
            * factorial(n).recip().expect("positive");
        Rational::neg_one_pow(k + b) * (first * second) * norm
    })
}

pub fn build_qk(g: i64, k: i64) -> PairingMatrix {
    build_qk_at(k, g, 3 * g - 3)
}

/// Q_k^{-1} at (X, Z). Entry ((a,n),(b,m)):
/// (-1)^{k+b} h_{b+m-a-n}(Z+1-k, ..., Z+1-b-m) h_{n-m}(X, X-1, ..., X-m)
///            * (k-b-m)! m!,
/// the column scaling matching the row normalization of `build_qk_at`.
pub fn build_qk_inv_at(k: i64, x: i64, z: i64) -> PairingMatrix {
    let idx = triangular_set(k);
    PairingMatrix::from_fn(idx.clone(), idx, |r, c| {
        let (a, n, b, m) = (r.a, r.n, c.a, c.n);
        let first = complete_sym(&range_vals(z + 1 - k, z + 1 - b - m), b + m - a - n);
        let second_vals: Vec<Rational> = (0..=m).map(|t| Rational::from_int(x - t)).collect();
        let second = complete_sym(&second_vals, n - m);
        let norm = factorial(k - b - m) * factorial(m);
        Rational::neg_one_pow(k + b) * (first * second) * norm
    })
}

pub fn build_qk_inv(g: i64, k: i64) -> PairingMatrix {
    build_qk_inv_at(k, g, 3 * g - 3)
}

fn int_pow(base: i64, e: i64) -> Rational {
    // convention 0^0 = 1
    if e == 0 {
        return Rational::one();
    }
    if base == 0 {
        return Rational::zero();
    }
    Rational::from_int(base).pow(e).expect("nonneg exponent")
}

/// S_k entry: n2^{n1} (a2+n2)^{k-n1-a1}, rows the triangular set of k,
/// columns {n2 <= a2 <= k-1}, with 0^0 = 1. The row indexed (k, 0) is a row
/// of ones.
pub fn build_sk(k: i64) -> PairingMatrix {
    PairingMatrix::from_fn(triangular_set(k), column_set(k), |r, c| {
        int_pow(c.n, r.n) * int_pow(c.a + c.n, k - r.n - r.a)
    })
}

/// S_{k,h}: rows the triangular set of k+h, columns {n2 <= a2 <= k-1},
/// entry (a2+n2)^{k+h-a1-n1} n2^{n1}.
pub fn build_skh(k: i64, h: i64) -> PairingMatrix {
    PairingMatrix::from_fn(triangular_set(k + h), column_set(k), |r, c| {
        int_pow(c.n, r.n) * int_pow(c.a + c.n, k + h - r.n - r.a)
    })
}

/// The extended matrix of the perverse-grading check: S_k with columns
/// enlarged to {n2 <= a2 <= k}. Its transpose has trivial kernel because
/// p_k(0, k) = 1.
pub fn build_sk_extended(k: i64) -> PairingMatrix {
    PairingMatrix::from_fn(triangular_set(k), column_set(k + 1), |r, c| {
        int_pow(c.n, r.n) * int_pow(c.a + c.n, k - r.n - r.a)
    })
}

/// Closed form of the raw pairing integral for the F/P basis:
/// (-1)^{a1+a2+1} 2^{a1+a2-g} (3g-3-a1-a2-n1-n2)! (n1+n2)! C(g, n1+n2),
/// with the vanishing convention on negative arguments.
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

/// The closed-form kernel vector of M_k^T:
/// v_k^{a1,n1} = Res_{t=0} (-1)^{k-a1-n1} (1+t)^{g-k-2} (1+2t)^{g-n1}
///               / t^{a1-n1+1},
/// returned over `mk_rows(k)` in canonical order.
pub fn vk_closed_form(g: i64, k: i64) -> Vec<Rational> {
    assert!(g >= k + 1);
    let ord = 2 * k + 2;
    let one_plus_t = Series::from_terms(
        Var::T,
        &[(0, Rational::one()), (1, Rational::one())],
        ord,
    );
    let one_plus_2t = Series::from_terms(
        Var::T,
        &[(0, Rational::one()), (1, Rational::from_int(2))],
        ord,
    );
    let base = one_plus_t
        .pow_i(g - k - 2)
        .expect("unit constant term");
    mk_rows(k)
        .iter()
        .map(|p| {
            let f = base
                .checked_mul(&one_plus_2t.pow_i(g - p.n).expect("unit"))
                .expect("same var");
            let sign = Rational::neg_one_pow(k - p.a - p.n);
            f.coeff(p.a - p.n).expect("within order") * sign
        })
        .collect()
}

/// The same vector by Newton differences:
/// v_k^{a1,n1} = (-1)^{k-a1-n1} [D_Z^{k-a1-n1} D_{X,-1}^{n1} p_k](g, 3g-k-2).
pub fn vk_newton(g: i64, k: i64) -> Vec<Rational> {
    let p = heatpoly::pk(k);
    mk_rows(k)
        .iter()
        .map(|pi| {
            let mut q = (*p).clone();
            for _ in 0..(k - pi.a - pi.n) {
                q = heatpoly::diff(&q, heatpoly::DiffOp::DZ);
            }
            for _ in 0..pi.n {
                q = heatpoly::diff(&q, heatpoly::DiffOp::DXMinus);
            }
            q.eval_int(g, 3 * g - k - 2) * Rational::neg_one_pow(k - pi.a - pi.n)
        })
        .collect()
}

pub fn vec_mat(v: &[Rational], m: &PairingMatrix) -> Vec<Rational> {
    assert_eq!(v.len(), m.n_rows());
    (0..m.n_cols())
        .map(|j| {
            let mut acc = Rational::zero();
            for (i, vi) in v.iter().enumerate() {
                if !vi.is_zero() && !m.entries[i][j].is_zero() {
                    acc += vi * &m.entries[i][j];
                }
            }
            acc
        })
        .collect()
}

/// Q~_{k,h}(g, 3g-3): Q_{k+h}(g, 3g-3) with the rows indexed by a >= k
/// replaced by the kernel-basis coefficient vectors of the polynomials
/// Z^j p_{k+h-i} in ascending lexicographic (i, j) order.
pub fn build_qtilde(g: i64, k: i64, h: i64) -> PairingMatrix {
    let kk = k + h;
    let mut q = build_qk(g, kk);
    let replaced: Vec<usize> = q
        .rows
        .iter()
        .enumerate()
        .filter(|(_, p)| p.a >= k)
        .map(|(i, _)| i)
        .collect();
    let polys = heatpoly::kernel_basis_polys(k, h);
    assert_eq!(replaced.len(), polys.len());
    for (slot, poly) in replaced.into_iter().zip(polys) {
        q.entries[slot] = q
            .cols
            .iter()
            .map(|c| {
                // coefficient of X^{n} Z^{k+h-a-n} in the polynomial
                let ze = kk - c.a - c.n;
                poly.coeff(c.n as u32, ze as u32)
            })
            .collect();
    }
    q
}

pub fn det_qtilde(g: i64, k: i64, h: i64) -> Rational {
    build_qtilde(g, k, h).det()
}

/// The redundancy-range predicate 3g >= 3k + h + 1.
pub fn redundancy_check(g: i64, k: i64, h: i64) -> bool {
    3 * g >= 3 * k + h + 1
}

/// A rational linear combination of monomials alpha^i beta^m (4 gamma)^j
/// eta^n, graded by defect def(alpha) = 0, def(beta) = def(gamma) =
/// def(eta) = 2.
#[derive(Debug, Clone, PartialEq)]
pub struct DefectClass(pub MultiPoly);

impl DefectClass {
    /// Minimum of the defects of the monomials; None for zero.
    pub fn defect(&self) -> Option<i64> {
        self.0
            .iter_terms()
            .map(|(e, _)| {
                2 * (e[PolyVar::Beta as usize] as i64
                    + e[PolyVar::Gamma4 as usize] as i64
                    + e[PolyVar::Eta as usize] as i64)
            })
            .min()
    }

    pub fn coefficient(&self, i: i64, m: i64, j: i64, n: i64) -> Rational {
        let mut e = [0i16; crate::exactalg::poly::NVARS];
        e[PolyVar::Alpha as usize] = i as i16;
        e[PolyVar::Beta as usize] = m as i16;
        e[PolyVar::Gamma4 as usize] = j as i16;
        e[PolyVar::Eta as usize] = n as i16;
        self.0
            .iter_terms()
            .find(|(ee, _)| **ee == e)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(Rational::zero)
    }

    /// Render in alpha, beta, gamma, eta with the 4^j conversion folded into
    /// the coefficients (the reporting-boundary convention).
    pub fn display_gamma(&self) -> String {
        let mut parts: Vec<String> = Vec::new();
        for (e, c) in self.0.iter_terms() {
            let j = e[PolyVar::Gamma4 as usize] as i64;
            let coeff = c * &Rational::from_int(4).pow(j).expect("nonneg");
            let mut mono = String::new();
            for (var, name) in [
                (PolyVar::Alpha, "alpha"),
                (PolyVar::Beta, "beta"),
                (PolyVar::Gamma4, "gamma"),
                (PolyVar::Eta, "eta"),
            ] {
                let p = e[var as usize];
                if p == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                if p == 1 {
                    mono.push_str(name);
                } else {
                    mono.push_str(&format!("{name}^{p}"));
                }
            }
            let body = if mono.is_empty() {
                coeff.to_exact_string()
            } else if coeff.is_one() {
                mono
            } else {
                format!("({})*{}", coeff.to_exact_string(), mono)
            };
            parts.push(body);
        }
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join(" + ")
        }
    }
}

/// The lowest-defect solution beta^k + eta F_k, with beta^k coefficient
/// exactly 1: the coefficient of t^k in
/// (1+beta t)^{g-k-2} (1+2 beta t)^g exp(2 eta t (alpha - 4 gamma t/(1+2 beta t)))
/// divided by the normalizer p_k(g, 3g-k-2).
pub fn lowest_defect_fk(g: i64, k: i64) -> DefectClass {
    assert!(g >= k + 1 && k >= 1);
    let ord = k as i64 + 1;
    let beta = MultiPoly::var(PolyVar::Beta);
    let one_plus_bt = Series::from_terms(Var::T, &[(0, MultiPoly::one()), (1, beta.clone())], ord);
    let one_plus_2bt = Series::from_terms(
        Var::T,
        &[(0, MultiPoly::one()), (1, beta.scale(&Rational::from_int(2)))],
        ord,
    );
    let base = one_plus_bt
        .pow_i(g - k - 2)
        .expect("unit constant term")
        .checked_mul(&one_plus_2bt.pow(g as u32))
        .expect("same var");
    // 2 eta t (alpha - gamma4 t / (1+2 beta t))
    let eta = MultiPoly::var(PolyVar::Eta);
    let alpha = MultiPoly::var(PolyVar::Alpha);
    let gamma4 = MultiPoly::var(PolyVar::Gamma4);
    let t_alpha = Series::monomial(Var::T, 1, alpha, ord);
    let t2_gamma = Series::monomial(Var::T, 2, gamma4, ord)
        .checked_mul(&one_plus_2bt.checked_inv().expect("unit"))
        .expect("same var");
    let arg = t_alpha
        .checked_sub(&t2_gamma)
        .expect("same var")
        .mul_coeff(&eta.scale(&Rational::from_int(2)));
    let gen = base
        .checked_mul(&arg.checked_exp().expect("positive valuation"))
        .expect("same var");
    let numerator = gen.coeff(k).expect("within order");
    let normalizer = heatpoly::pk(k).eval_int(g, 3 * g - k - 2);
    assert!(
        !normalizer.is_zero(),
        "normalizer p_k(g, 3g-k-2) must not vanish for g >= k+1"
    );
    DefectClass(numerator.scale(&normalizer.recip().expect("nonzero")))
}

/// Outcome of the general extension problem for beta^{k-h} (4 gamma)^h.
#[derive(Debug, Clone)]
pub struct GeneralSolution {
    pub kernel_dim: usize,
    pub distinguished_entry_nonzero: bool,
    /// Normalized solution class (distinguished coefficient 1) when the
    /// kernel is one-dimensional with nonzero distinguished entry.
    pub solution: Option<DefectClass>,
    /// The raw kernel basis over `mkh_rows(k, h)`.
    pub kernel: Vec<Vec<Rational>>,
}

/// Computes ker M_{k,h}^T and reports honestly: a unique normalized
/// solution when the kernel is a line with nonzero distinguished entry,
/// dimensions and flags otherwise.
pub fn solve_general(g: i64, k: i64, h: i64) -> GeneralSolution {
    let m = build_mkh(g, k, h);
    let kernel = m.left_kernel();
    let rows = &m.rows;
    let dist_pos = rows
        .iter()
        .position(|p| *p == PairIndex::new(k, h))
        .expect("distinguished row present");
    let distinguished_entry_nonzero = kernel.iter().any(|v| !v[dist_pos].is_zero());
    let solution = if kernel.len() == 1 && !kernel[0][dist_pos].is_zero() {
        Some(kernel_vector_to_class(&kernel[0], rows, k, h))
    } else {
        None
    };
    GeneralSolution {
        kernel_dim: kernel.len(),
        distinguished_entry_nonzero,
        solution,
        kernel,
    }
}

/// Convert a kernel vector of M_{k,h}^T into the class
/// beta^{k-h}(4 gamma)^h + eta F: row (a1, n1) carries the monomial
/// beta^{a1-n1} (4 gamma)^{n1} eta^{k-a1} alpha^{k+h-a1-n1} with the
/// column-operation weight (-2)^{k+h-a1} / ((k+h-a1-n1)! n1!), then the
/// distinguished coefficient is normalized to 1.
fn kernel_vector_to_class(
    v: &[Rational],
    rows: &[PairIndex],
    k: i64,
    h: i64,
) -> DefectClass {
    let kk = k + h;
    let mut acc = MultiPoly::zero();
    for (pi, coeff) in rows.iter().zip(v) {
        if coeff.is_zero() {
            continue;
        }
        let weight = Rational::from_int(-2).pow(kk - pi.a).expect("nonneg")
            * factorial(kk - pi.a - pi.n).recip().expect("positive")
            * factorial(pi.n).recip().expect("positive");
        let mut e = [0i16; crate::exactalg::poly::NVARS];
        e[PolyVar::Beta as usize] = (pi.a - pi.n) as i16;
        e[PolyVar::Gamma4 as usize] = pi.n as i16;
        e[PolyVar::Eta as usize] = (k - pi.a) as i16;
        e[PolyVar::Alpha as usize] = (kk - pi.a - pi.n) as i16;
        acc = acc.add(&MultiPoly::term(e, coeff * &weight));
    }
    let class = DefectClass(acc);
    let dist = class.coefficient(0, k - h, h, 0);
    assert!(!dist.is_zero());
    DefectClass(class.0.scale(&dist.recip().expect("nonzero")))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn canonical_order() {
        let rows = mk_rows(2);
        let expect = vec![
            PairIndex::new(0, 0),
            PairIndex::new(1, 0),
            PairIndex::new(2, 0),
            PairIndex::new(1, 1),
        ];
        assert_eq!(rows, expect);
    }

    #[test]
    fn mk_k1_shape_and_entries() {
        for g in 2..=5 {
            let m = build_mk(g, 1);
            assert_eq!(m.n_rows(), 2);
            assert_eq!(m.n_cols(), 1);
            assert_eq!(m.entries[0][0], q(3 * g - 3));
            assert_eq!(m.entries[1][0], q(1));
        }
    }

    #[test]
    fn mk_g3_k2_sample_entry() {
        let m = build_mk(3, 2);
        let e = m
            .entry(PairIndex::new(0, 0), PairIndex::new(1, 1))
            .unwrap();
        assert_eq!(*e, q(6));
    }

    #[test]
    fn q1_explicit_and_inverse() {
        // Q_1 = [[-1, 3g-3], [0, 1]] in canonical order
        for g in 2..=4 {
            let qk = build_qk(g, 1);
            assert_eq!(qk.entries[0][0], q(-1));
            assert_eq!(qk.entries[0][1], q(3 * g - 3));
            assert_eq!(qk.entries[1][0], q(0));
            assert_eq!(qk.entries[1][1], q(1));
            assert!(qk.mul(&build_qk_inv(g, 1)).is_identity());
        }
    }

    #[test]
    fn q_diagonal_signs() {
        // diagonal (-1)^{k+a} / ((k-a-n)! n!): the sign pattern of the
        // source, with the factorial normalization that makes the
        // factorization identity hold
        for k in 1..=5 {
            let g = k + 2;
            let qk = build_qk(g, k);
            for (i, p) in qk.rows.iter().enumerate() {
                let norm = factorial(k - p.a - p.n).recip().unwrap()
                    * factorial(p.n).recip().unwrap();
                assert_eq!(
                    qk.entries[i][i],
                    Rational::neg_one_pow(k + p.a) * norm,
                    "k={k} index {p}"
                );
                assert_eq!(
                    qk.entries[i][i].signum(),
                    if (k + p.a) % 2 == 0 { 1 } else { -1 }
                );
            }
        }
    }

    #[test]
    fn q_times_q_inverse_is_identity() {
        for k in 1..=6 {
            for g in (k + 1)..=(k + 4) {
                assert!(
                    build_qk(g, k).mul(&build_qk_inv(g, k)).is_identity(),
                    "k={k} g={g}"
                );
            }
        }
    }

    #[test]
    fn s1_entries_and_ones_row() {
        let s = build_sk(1);
        // rows (0,0), (1,0); column (0,0): entries 0 and 1
        assert_eq!(s.entries[0][0], q(0));
        assert_eq!(s.entries[1][0], q(1));
        // the row indexed (k, 0) is all ones
        for k in 1..=6 {
            let s = build_sk(k);
            let ri = s
                .rows
                .iter()
                .position(|p| *p == PairIndex::new(k, 0))
                .unwrap();
            assert!(s.entries[ri].iter().all(|e| e.is_one()), "k={k}");
        }
    }

    #[test]
    fn factorization_mk_qk_sk() {
        for k in 1..=6 {
            for g in (k + 1)..=(k + 4) {
                let lhs = build_mk(g, k);
                let rhs = build_qk(g, k).mul(&build_sk(k));
                assert_eq!(lhs.entries, rhs.entries, "k={k} g={g}");
            }
        }
    }

    #[test]
    fn mkh_row_counts_match_closed_form() {
        for k in 1..=6 {
            for h in 0..=k {
                assert_eq!(
                    mkh_rows(k, h).len() as i64,
                    mkh_row_count(k, h),
                    "k={k} h={h}"
                );
            }
        }
        // (k,h) = (3,3): rows 7, cols 6
        assert_eq!(mkh_rows(3, 3).len(), 7);
        assert_eq!(mk_cols(3).len(), 6);
    }

    #[test]
    fn mkh_h0_matches_mk() {
        for k in 1..=4 {
            for g in (k + 1)..=(k + 3) {
                assert_eq!(build_mkh(g, k, 0), build_mk(g, k), "k={k} g={g}");
            }
        }
    }

    #[test]
    fn mkh_is_submatrix_of_mk_plus_h() {
        // (k,h) = (3,0) rows restricted from M_3 at g=4
        let m30 = build_mkh(4, 3, 0);
        let m3 = build_mk(4, 3);
        for (ri, r) in m30.rows.iter().enumerate() {
            for (ci, c) in m30.cols.iter().enumerate() {
                assert_eq!(m30.entries[ri][ci], *m3.entry(*r, *c).unwrap());
            }
        }
    }

    #[test]
    fn kernel_of_mk_is_one_dimensional_and_vk_annihilates() {
        for k in 1..=5 {
            for g in (k + 1)..=(k + 3) {
                let m = build_mk(g, k);
                let kernel = m.left_kernel();
                assert_eq!(kernel.len(), 1, "k={k} g={g}");
                let vk = vk_closed_form(g, k);
                assert!(
                    vec_mat(&vk, &m).iter().all(|e| e.is_zero()),
                    "v_k M_k != 0 at k={k} g={g}"
                );
                // Newton form equals the residue form exactly
                assert_eq!(vk, vk_newton(g, k), "k={k} g={g}");
            }
        }
    }

    #[test]
    fn vk_k1_entries() {
        // k=1: v = (-1, 3g-3)
        for g in 2..=5 {
            let v = vk_closed_form(g, 1);
            assert_eq!(v, vec![q(-1), q(3 * g - 3)]);
        }
    }

    #[test]
    fn transported_kernel_is_g_independent() {
        // v_k Q_k is the p_k coefficient vector, independent of g
        for k in 1..=4 {
            let mut transported = Vec::new();
            for g in (k + 1)..=(k + 4) {
                let v = vk_closed_form(g, k);
                let mut w = vec_mat(&v, &build_qk(g, k));
                linalg::normalize_primitive(&mut w);
                transported.push(w);
            }
            assert!(
                transported.windows(2).all(|p| p[0] == p[1]),
                "transported kernel varies with g at k={k}"
            );
            // and it spans ker S_k^T
            let sk = build_sk(k);
            assert!(vec_mat(&transported[0], &sk).iter().all(|e| e.is_zero()));
        }
    }

    #[test]
    fn extended_s_matrix_has_trivial_kernel() {
        for k in 1..=6 {
            assert!(build_sk_extended(k).left_kernel().is_empty(), "k={k}");
        }
    }

    #[test]
    fn skh_kernel_dimension() {
        for k in 1..=5 {
            for h in 0..=k.min(3) {
                let dim = build_skh(k, h).left_kernel().len() as i64;
                assert_eq!(dim, (h + 1) * (h + 2) / 2, "k={k} h={h}");
            }
        }
    }

    #[test]
    fn skh_kernel_matches_heat_polynomials() {
        // coefficient vectors of Z^j p_{k+h-i} span ker S_{k,h}^T
        for (k, h) in [(1, 1), (2, 1), (2, 2), (3, 2)] {
            let s = build_skh(k, h);
            let polys = heatpoly::kernel_basis_polys(k, h);
            for poly in polys {
                let v: Vec<Rational> = s
                    .rows
                    .iter()
                    .map(|p| poly.coeff(p.n as u32, (k + h - p.a - p.n) as u32))
                    .collect();
                assert!(
                    vec_mat(&v, &s).iter().all(|e| e.is_zero()),
                    "k={k} h={h}"
                );
            }
        }
    }

    #[test]
    fn closed_form_pairing_examples() {
        assert_eq!(closed_form_pairing(2, 1, 0, 0, 0), q(1));
        // g=2, all zero: -(1/4) * 3! * C(2,0) = -3/2
        assert_eq!(closed_form_pairing(2, 0, 0, 0, 0), Rational::new(-3, 2));
        // n1+n2 > g vanishes
        assert_eq!(closed_form_pairing(2, 3, 3, 0, 0), Rational::zero());
    }

    #[test]
    fn ratiomat_normalization_recovers_mk() {
        // M_k entry = (-2)^{k-a1}/((k-a1-n1)! n1!) * closed(a1,n1,a2,n2)/closed(k,0,a2,n2)
        for k in 1..=3 {
            for g in (k + 1)..=(k + 2) {
                let m = build_mk(g, k);
                for (ri, r) in m.rows.iter().enumerate() {
                    for (ci, c) in m.cols.iter().enumerate() {
                        let num = closed_form_pairing(g, r.a, r.n, c.a, c.n);
                        let den = closed_form_pairing(g, k, 0, c.a, c.n);
                        let w = Rational::from_int(-2).pow(k - r.a).unwrap()
                            * factorial(k - r.a - r.n).recip().unwrap()
                            * factorial(r.n).recip().unwrap();
                        assert_eq!(m.entries[ri][ci], w * (num / den), "k={k} g={g}");
                    }
                }
            }
        }
    }

    #[test]
    fn lowest_defect_k1() {
        // beta + (2/(3g-3)) alpha eta
        for g in 2..=6 {
            let c = lowest_defect_fk(g, 1);
            assert_eq!(c.coefficient(0, 1, 0, 0), Rational::one());
            assert_eq!(
                c.coefficient(1, 0, 0, 1),
                Rational::new(2, 3 * g - 3)
            );
            assert_eq!(c.0.num_terms(), 2);
            assert_eq!(c.defect(), Some(2));
        }
    }

    #[test]
    fn normalizer_at_minimal_genus() {
        // p_k(k+1, 2k+1) = 2^{k+1}-1
        for k in 1..=6 {
            let val = heatpoly::pk(k).eval_int(k + 1, 2 * k + 1);
            assert_eq!(val, q(2).pow(k + 1).unwrap() - Rational::one());
        }
    }

    #[test]
    fn solve_general_h0_matches_lowest_defect() {
        for k in 1..=3 {
            for g in (k + 1)..=(k + 2) {
                let sol = solve_general(g, k, 0);
                assert_eq!(sol.kernel_dim, 1);
                assert!(sol.distinguished_entry_nonzero);
                let class = sol.solution.expect("unique solution");
                assert_eq!(class, lowest_defect_fk(g, k), "k={k} g={g}");
            }
        }
    }

    #[test]
    fn outside_redundancy_range_334() {
        assert!(!redundancy_check(4, 3, 3));
        assert!(redundancy_check(4, 3, 2));
        let sol = solve_general(4, 3, 3);
        assert!(sol.kernel_dim > 1, "kernel dim = {}", sol.kernel_dim);
        assert!(sol.distinguished_entry_nonzero);
        assert_eq!(det_qtilde(4, 3, 3), Rational::zero());
    }

    #[test]
    fn qtilde_line_11() {
        // det Q~_{1,1}(g, 3g-3) = (3g-3)(3g-4)/2, worked by hand: the only
        // kept row of Q_2 is (0,0) with normalization 1/2!, and the three
        // replaced rows are p_2, p_1, Z p_1
        for g in 3..=5 {
            assert_eq!(
                det_qtilde(g, 1, 1),
                Rational::new((3 * g - 3) * (3 * g - 4), 2),
                "g={g}"
            );
        }
    }

    #[test]
    fn qtilde_times_skh_zero_rows_at_replaced_positions() {
        for (k, h) in [(1, 1), (2, 1), (2, 2)] {
            let g = k + h + 2;
            let qt = build_qtilde(g, k, h);
            let s = build_skh(k, h);
            let prod = qt.mul(&s);
            for (ri, p) in prod.rows.iter().enumerate() {
                let zero_row = prod.entries[ri].iter().all(|e| e.is_zero());
                assert_eq!(zero_row, p.a >= k, "k={k} h={h} row {p}");
            }
        }
    }
}
