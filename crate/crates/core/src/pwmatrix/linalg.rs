//! Exact rational linear algebra: fraction-free elimination, determinants,
//! kernels. Deterministic pivoting (first usable row, columns left to
//! right) so kernel bases come out byte-stable across runs.

use crate::exactalg::Rational;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub fn transpose(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    if m.is_empty() {
        return Vec::new();
    }
    let rows = m.len();
    let cols = m[0].len();
    (0..cols)
        .map(|j| (0..rows).map(|i| m[i][j].clone()).collect())
        .collect()
}

/// Determinant by fraction-free (Bareiss) elimination; every intermediate
/// division is exact.
pub fn det(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "determinant of a non-square matrix");
    if n == 0 {
        return Rational::one();
    }
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    let mut sign = 1i32;
    let mut prev = Rational::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &(&a[k][k] * &a[i][j]) - &(&a[i][k] * &a[k][j]);
                a[i][j] = num / prev.clone();
            }
            a[i][k] = Rational::zero();
        }
        prev = a[k][k].clone();
    }
    let mut d = a[n - 1][n - 1].clone();
    if sign < 0 {
        d = -d;
    }
    d
}

/// Basis of the right kernel {x : Mx = 0}, one vector per free column,
/// ordered by free-column position. Each vector is integral, primitive,
/// and has positive first nonzero coordinate.
pub fn kernel_basis(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    if cols == 0 {
        return Vec::new();
    }
    if rows == 0 {
        // everything is free
        return (0..cols)
            .map(|j| {
                let mut v = vec![Rational::zero(); cols];
                v[j] = Rational::one();
                v
            })
            .collect();
    }
    let mut a: Vec<Vec<Rational>> = m.to_vec();
    // reduced row echelon form
    let mut pivot_cols = Vec::new();
    let mut r = 0usize;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip().expect("pivot nonzero");
        for j in c..cols {
            a[r][j] = &a[r][j] * &inv;
        }
        for i in 0..rows {
            if i != r && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for j in c..cols {
                    let sub = &f * &a[r][j];
                    a[i][j] = &a[i][j] - &sub;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let free_cols: Vec<usize> = (0..cols).filter(|c| !pivot_cols.contains(c)).collect();
    free_cols
        .iter()
        .map(|&fc| {
            let mut v = vec![Rational::zero(); cols];
            v[fc] = Rational::one();
            for (ri, &pc) in pivot_cols.iter().enumerate() {
                v[pc] = -a[ri][fc].clone();
            }
            normalize_primitive(&mut v);
            v
        })
        .collect()
}

/// Kernel of M^T, i.e. the left kernel {v : vM = 0} of M.
pub fn left_kernel_basis(m: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    kernel_basis(&transpose(m))
}

pub fn rank(m: &[Vec<Rational>]) -> usize {
    let cols = if m.is_empty() { 0 } else { m[0].len() };
    cols - kernel_basis(m).len()
}

/// Scale a rational vector to integral primitive form with positive first
/// nonzero coordinate.
pub fn normalize_primitive(v: &mut [Rational]) {
    let mut lcm = BigInt::one();
    for q in v.iter() {
        lcm = lcm.lcm(q.denom());
    }
    let mut gcd = BigInt::zero();
    let scaled: Vec<BigInt> = v
        .iter()
        .map(|q| q.numer() * (&lcm / q.denom()))
        .collect();
    for n in &scaled {
        gcd = gcd.gcd(n);
    }
    if gcd.is_zero() {
        return;
    }
    let first_sign_neg = scaled
        .iter()
        .find(|n| !n.is_zero())
        .map(|n| n.is_negative())
        .unwrap_or(false);
    let denom = if first_sign_neg { -gcd } else { gcd };
    for (slot, n) in v.iter_mut().zip(scaled) {
        *slot = Rational::from_bigint(n / &denom);
    }
}

/// Matrix product.
pub fn matmul(a: &[Vec<Rational>], b: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
    let n = a.len();
    let k = if n == 0 { 0 } else { a[0].len() };
    let m = if b.is_empty() { 0 } else { b[0].len() };
    assert_eq!(k, b.len(), "inner dimensions must agree");
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    let mut acc = Rational::zero();
                    for t in 0..k {
                        if !a[i][t].is_zero() && !b[t][j].is_zero() {
                            acc += &a[i][t] * &b[t][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    #[test]
    fn det_small() {
        let m = vec![vec![q(1), q(2)], vec![q(3), q(4)]];
        assert_eq!(det(&m), q(-2));
        let singular = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        assert_eq!(det(&singular), q(0));
        // needs a row swap
        let m = vec![vec![q(0), q(1)], vec![q(1), q(0)]];
        assert_eq!(det(&m), q(-1));
    }

    #[test]
    fn kernel_of_rank_deficient() {
        // rows (1,2,3), (2,4,6): kernel is 2-dimensional
        let m = vec![vec![q(1), q(2), q(3)], vec![q(2), q(4), q(6)]];
        let ker = kernel_basis(&m);
        assert_eq!(ker.len(), 2);
        for v in &ker {
            for row in &m {
                let dot: Rational = row
                    .iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b);
                assert!(dot.is_zero());
            }
            // primitive with positive leading coordinate
            let first = v.iter().find(|x| !x.is_zero()).unwrap();
            assert!(first.is_positive());
        }
    }

    #[test]
    fn primitive_normalization() {
        let mut v = vec![Rational::new(-2, 3), Rational::new(4, 9), q(0)];
        normalize_primitive(&mut v);
        assert_eq!(v, vec![q(3), q(-2), q(0)]);
    }
}
