//! Exact linear algebra over the rationals and the integers.
//!
//! Everything here is dense or sparse row-major elimination on
//! [`BigRational`] / [`BigInt`]; there is no floating point anywhere.

mod echelon;
mod integer;

pub use echelon::{Echelon, SparseVec};
pub use integer::{bareiss_determinant, int_rank, lattice_basis, smith_invariants};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub type Matrix = Vec<Vec<Q>>;

pub fn zeros(rows: usize, cols: usize) -> Matrix {
    vec![vec![Q::zero(); cols]; rows]
}

pub fn identity(n: usize) -> Matrix {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Q::one();
    }
    m
}

pub fn transpose(a: &Matrix, cols: usize) -> Matrix {
    (0..cols)
        .map(|j| a.iter().map(|row| row[j].clone()).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix, inner: usize, cols: usize) -> Matrix {
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = Q::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc += &row[k] * &b[k][j];
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec(a: &Matrix, v: &[Q]) -> Vec<Q> {
    a.iter().map(|row| dot(row, v)).collect()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter()
        .zip(b)
        .filter(|(x, y)| !x.is_zero() && !y.is_zero())
        .fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(a: &mut Matrix, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == a.len() {
            break;
        }
        let Some(p) = (r..a.len()).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = a[r].clone();
        for (i, row) in a.iter_mut().enumerate() {
            if i != r && !row[c].is_zero() {
                let f = row[c].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank(a: &Matrix, cols: usize) -> usize {
    let mut e = Echelon::new();
    for row in a {
        e.insert(SparseVec::from_dense(row));
    }
    debug_assert!(e.rank() <= cols);
    e.rank()
}

/// Basis of the right kernel `{x : A x = 0}`.
pub fn nullspace(a: &Matrix, cols: usize) -> Vec<Vec<Q>> {
    let mut m = a.clone();
    let pivots = rref(&mut m, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); cols];
            v[f] = Q::one();
            for (r, &p) in pivots.iter().enumerate() {
                v[p] = -m[r][f].clone();
            }
            v
        })
        .collect()
}

/// One solution of `A x = b` (free variables set to zero), if any exists.
pub fn solve(a: &Matrix, b: &[Q], cols: usize) -> Option<Vec<Q>> {
    let mut aug: Matrix = a
        .iter()
        .zip(b)
        .map(|(row, bi)| {
            let mut r = row.clone();
            r.push(bi.clone());
            r
        })
        .collect();
    let pivots = rref(&mut aug, cols + 1);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut x = vec![Q::zero(); cols];
    for (r, &p) in pivots.iter().enumerate() {
        x[p] = aug[r][cols].clone();
    }
    Some(x)
}

/// Scale a rational vector to a primitive integer vector with the same direction.
pub fn primitive_integer(v: &[Q]) -> Vec<BigInt> {
    let denom = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Q::from_integer(denom.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    ints.into_iter().map(|x| x / &g).collect()
}

/// Integer basis of the rational right kernel of an integer matrix.
pub fn integer_kernel(a: &[Vec<i64>], cols: usize) -> Vec<Vec<i64>> {
    let m: Matrix = a.iter().map(|row| row.iter().map(|&x| q(x)).collect()).collect();
    nullspace(&m, cols)
        .iter()
        .map(|v| {
            primitive_integer(v)
                .into_iter()
                .map(|x| i64::try_from(x).expect("kernel entries fit in i64"))
                .collect()
        })
        .collect()
}

/// Signature `(positive, negative, zero)` of a symmetric rational matrix by
/// congruence diagonalization.
///
/// A zero diagonal with a nonzero off-diagonal entry `a_ij` is handled by
/// adding row/column `j` to row/column `i`, which makes the new diagonal
/// entry `2 a_ij` nonzero; this is the hyperbolic-block step folded into a
/// single congruence.
pub fn symmetric_signature(a: &Matrix) -> (usize, usize, usize) {
    let n = a.len();
    let mut m = a.clone();
    let (mut pos, mut neg) = (0, 0);
    let mut k = 0;
    while k < n {
        let diag = (k..n).find(|&i| !m[i][i].is_zero());
        let p = match diag {
            Some(p) => p,
            None => {
                let off = (k..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).find(|&(i, j)| !m[i][j].is_zero());
                let Some((i, j)) = off else {
                    break;
                };
                // row_i += row_j, col_i += col_j
                for c in 0..n {
                    let v = m[j][c].clone();
                    m[i][c] += v;
                }
                for r in 0..n {
                    let v = m[r][j].clone();
                    m[r][i] += v;
                }
                i
            }
        };
        m.swap(k, p);
        for row in m.iter_mut() {
            row.swap(k, p);
        }
        let pivot = m[k][k].clone();
        if pivot.is_positive() {
            pos += 1;
        } else {
            neg += 1;
        }
        for i in k + 1..n {
            if m[i][k].is_zero() {
                continue;
            }
            let f = &m[i][k] / &pivot;
            for c in k..n {
                let v = &f * &m[k][c];
                m[i][c] -= v;
            }
            for r in k..n {
                let v = &f * &m[r][k];
                m[r][i] -= v;
            }
        }
        k += 1;
    }
    (pos, neg, n - pos - neg)
}

/// Exact determinant of a rational square matrix.
pub fn determinant(a: &Matrix) -> Q {
    let n = a.len();
    if n == 0 {
        return Q::one();
    }
    let denom = a.iter().flatten().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<Vec<BigInt>> = a
        .iter()
        .map(|row| row.iter().map(|x| (x * Q::from_integer(denom.clone())).to_integer()).collect())
        .collect();
    let d = bareiss_determinant(ints);
    Q::new(d, num_traits::pow(denom, n))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mat(rows: &[&[i64]]) -> Matrix {
        rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
    }

    #[test]
    fn kernel_and_rank() {
        let a = mat(&[&[1, 1, 1], &[2, 2, 2]]);
        assert_eq!(rank(&a, 3), 1);
        let k = nullspace(&a, 3);
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(mat_vec(&a, v).iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let a = mat(&[&[1, 2], &[3, 4]]);
        let x = solve(&a, &[q(5), q(6)], 2).unwrap();
        assert_eq!(mat_vec(&a, &x), vec![q(5), q(6)]);
        let b = mat(&[&[1, 1], &[1, 1]]);
        assert!(solve(&b, &[q(1), q(2)], 2).is_none());
    }

    #[test]
    fn signature_with_zero_diagonal() {
        // hyperbolic plane plus a negative line
        let a = mat(&[&[0, 1, 0], &[1, 0, 0], &[0, 0, -3]]);
        assert_eq!(symmetric_signature(&a), (1, 2, 0));
        let z = zeros(2, 2);
        assert_eq!(symmetric_signature(&z), (0, 0, 2));
    }

    #[test]
    fn determinant_matches_cofactor() {
        let a = mat(&[&[2, 1, 0], &[1, 3, 1], &[0, 1, 4]]);
        // 2(12-1) - 1(4-0) = 18
        assert_eq!(determinant(&a), q(18));
        let h = vec![vec![q_frac(1, 2), q(1)], vec![q(1), q(0)]];
        assert_eq!(determinant(&h), q(-1));
    }
}
