//! Minkowski weights and the balancing condition.

use num_traits::Zero;
use rayon::prelude::*;

use super::BergmanFan;
use crate::linalg::{int_rank, integer_kernel, q, Echelon, SparseVec, Q};

/// One row per `(τ, m)` with `τ` a `(k-1)`-cone and `m` in an integer basis
/// of `<τ>^⊥`; the entry at the `k`-cone `τ + f` is `<f, m>`. Columns are
/// positions within `fan.cones_of_dim(k)`.
///
/// The same rows present the linear relations of the Chow ring in degree `k`.
pub fn balancing_rows(fan: &BergmanFan, k: usize) -> Vec<SparseVec> {
    if k == 0 {
        return Vec::new();
    }
    let start = fan.cones_of_dim(k).start;
    let d = fan.ambient_dim();
    let taus: Vec<usize> = fan.cones_of_dim(k - 1).collect();
    let blocks: Vec<Vec<SparseVec>> = taus
        .par_iter()
        .map(|&tau| {
            let link = fan.link(tau);
            if link.is_empty() {
                return Vec::new();
            }
            let span: Vec<Vec<i64>> = fan.cone(tau).iter().map(|&r| fan.ray_vector(r).to_vec()).collect();
            let perp = if span.is_empty() {
                (0..d).map(|i| (0..d).map(|j| i64::from(i == j)).collect()).collect()
            } else {
                integer_kernel(&span, d)
            };
            perp.iter()
                .map(|m| {
                    SparseVec::from_pairs(link.iter().map(|&(f, sigma)| {
                        let v: i64 = fan.ray_vector(f).iter().zip(m).map(|(a, b)| a * b).sum();
                        (sigma - start, q(v))
                    }))
                })
                .filter(|row| !row.is_zero())
                .collect()
        })
        .collect();
    blocks.into_iter().flatten().collect()
}

/// Basis of `MW_k(Σ) ⊗ Q`, as weight vectors over `fan.cones_of_dim(k)`.
pub fn minkowski_weights(fan: &BergmanFan, k: usize) -> Vec<Vec<Q>> {
    let cols = fan.count_of_dim(k);
    let mut e = Echelon::new();
    for row in balancing_rows(fan, k) {
        e.insert(row);
    }
    e.kernel_basis(cols)
}

/// Direct test of the balancing condition: at every `(k-1)`-cone `τ`,
/// `Σ ω(τ + f) f` lies in the span of `τ`.
pub fn is_balanced(fan: &BergmanFan, k: usize, weights: &[Q]) -> bool {
    if k == 0 {
        return true;
    }
    let start = fan.cones_of_dim(k).start;
    let d = fan.ambient_dim();
    fan.cones_of_dim(k - 1).all(|tau| {
        let mut sum = vec![Q::zero(); d];
        for &(f, sigma) in fan.link(tau) {
            for (s, &x) in sum.iter_mut().zip(fan.ray_vector(f)) {
                *s += &weights[sigma - start] * q(x);
            }
        }
        let denom = sum.iter().fold(num_bigint::BigInt::from(1), |acc, x| {
            num_integer::Integer::lcm(&acc, x.denom())
        });
        let scaled: Vec<i64> = sum
            .iter()
            .map(|x| i64::try_from((x * Q::from_integer(denom.clone())).to_integer()).expect("small weights"))
            .collect();
        let mut rows: Vec<Vec<i64>> = fan.cone(tau).iter().map(|&r| fan.ray_vector(r).to_vec()).collect();
        let base = int_rank(&rows);
        rows.push(scaled);
        int_rank(&rows) == base
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{build_fan, OrderFilter};
    use crate::matroid::catalog;

    #[test]
    fn top_weights_of_matroid_fans_are_constant() {
        for name in ["u23", "u24", "u34", "fano", "k4"] {
            let m = catalog::get(name).unwrap();
            let fan = build_fan(&m, &OrderFilter::full(&m), true).unwrap();
            let r = m.rank() - 1;
            let mw = minkowski_weights(&fan, r);
            assert_eq!(mw.len(), 1, "{name}");
            assert!(mw[0].iter().all(|w| *w == mw[0][0]), "{name}");
            assert!(is_balanced(&fan, r, &mw[0]));
            assert_eq!(minkowski_weights(&fan, 0).len(), 1);
            assert!(minkowski_weights(&fan, r + 1).is_empty());
        }
    }

    #[test]
    fn unbalanced_weight_is_detected() {
        let m = catalog::fano();
        let fan = build_fan(&m, &OrderFilter::full(&m), true).unwrap();
        let mut w = vec![q(1); fan.count_of_dim(2)];
        w[0] = q(2);
        assert!(!is_balanced(&fan, 2, &w));
    }

    #[test]
    fn codimension_one_stars_sum_to_zero() {
        let m = catalog::fano();
        let fan = build_fan(&m, &OrderFilter::full(&m), true).unwrap();
        for tau in fan.cones_of_dim(1) {
            let link: Vec<Vec<i64>> = fan.link(tau).iter().map(|&(f, _)| fan.ray_vector(f).to_vec()).collect();
            let mut rows: Vec<Vec<i64>> = fan.cone(tau).iter().map(|&r| fan.ray_vector(r).to_vec()).collect();
            let mut sum = vec![0; fan.ambient_dim()];
            for v in &link {
                for (s, x) in sum.iter_mut().zip(v) {
                    *s += x;
                }
            }
            let base = int_rank(&rows);
            rows.push(sum);
            assert_eq!(int_rank(&rows), base);
            // every proper subset of the link is independent modulo the span of τ
            let mut partial: Vec<Vec<i64>> = fan.cone(tau).iter().map(|&r| fan.ray_vector(r).to_vec()).collect();
            partial.extend(link[..link.len() - 1].iter().cloned());
            assert_eq!(int_rank(&partial), partial.len());
        }
    }
}
