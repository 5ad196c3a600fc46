//! Piecewise linear functions on Bergman fans and exact convexity tests.

use std::collections::BTreeMap;

use num_traits::{Signed, Zero};
use rayon::prelude::*;

use super::{BergmanFan, ConeId, RayLabel};
use crate::error::{Error, Result};
use crate::linalg::{nullspace, q, solve, Matrix, Q};
use crate::lp::{maximize, LpOutcome};
use crate::matroid::Matroid;
use crate::subset::Subset;

/// `Σ c_e x_e` in the Courant basis, keyed by generator label so that the
/// same function can be read on several fans of one matroid. Missing labels
/// carry the value zero.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PlFunction {
    values: BTreeMap<RayLabel, Q>,
}

impl PlFunction {
    pub fn new() -> PlFunction {
        PlFunction::default()
    }

    pub fn from_pairs<I: IntoIterator<Item = (RayLabel, Q)>>(pairs: I) -> PlFunction {
        let mut f = PlFunction::new();
        for (label, v) in pairs {
            f.set(label, v);
        }
        f
    }

    pub fn set(&mut self, label: RayLabel, v: Q) {
        if v.is_zero() {
            self.values.remove(&label);
        } else {
            self.values.insert(label, v);
        }
    }

    pub fn value(&self, label: RayLabel) -> Q {
        self.values.get(&label).cloned().unwrap_or_else(Q::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (RayLabel, &Q)> {
        self.values.iter().map(|(&l, v)| (l, v))
    }

    /// Values on the rays of `fan`, in ray order.
    pub fn on(&self, fan: &BergmanFan) -> Vec<Q> {
        fan.rays().iter().map(|&l| self.value(l)).collect()
    }

    /// `res(m) = Σ <e, m> x_e` on the rays of `fan`.
    pub fn linear(fan: &BergmanFan, m: &[Q]) -> PlFunction {
        PlFunction::from_pairs((0..fan.num_rays()).map(|r| (fan.ray_label(r), pairing(fan.ray_vector(r), m))))
    }

    pub fn sub(&self, other: &PlFunction) -> PlFunction {
        let mut out = self.clone();
        for (l, v) in other.iter() {
            out.set(l, out.value(l) - v);
        }
        out
    }
}

pub fn pairing(e: &[i64], m: &[Q]) -> Q {
    e.iter().zip(m).filter(|(x, _)| **x != 0).map(|(&x, y)| q(x) * y).sum()
}

/// `c_I = |I| (|E| - |I|)`, strictly submodular on every ground set.
pub fn default_submodular(n: usize) -> impl Fn(Subset) -> Q {
    move |s| q((s.len() * (n - s.len())) as i64)
}

/// Check that `c` (with `c_∅ = c_E = 0`) is strictly submodular and return
/// the restriction of `Σ c_S x_S` to the rays of Bergman fans of `m`:
/// `e_F ↦ c_F` and `e_i ↦ c_{i}`.
///
/// Strictness on incomparable pairs is equivalent to strictness of every
/// local square `c(S+a) + c(S+b) > c(S) + c(S+a+b)`, since the defect of a
/// pair is a sum of such squares.
pub fn submodular_to_class(m: &Matroid, c: impl Fn(Subset) -> Q) -> Result<PlFunction> {
    let n = m.size();
    let ground = m.ground();
    let table: Vec<Q> = (0..1u32 << n)
        .map(|s| {
            let s = Subset(s);
            if s.is_empty() || s == ground {
                Q::zero()
            } else {
                c(s)
            }
        })
        .collect();
    for s in 0..1u32 << n {
        let set = Subset(s);
        let outside: Vec<usize> = ground.difference(set).to_vec();
        for (k, &a) in outside.iter().enumerate() {
            for &b in &outside[k + 1..] {
                let sa = set.with(a).0 as usize;
                let sb = set.with(b).0 as usize;
                let sab = set.with(a).with(b).0 as usize;
                if &table[sa] + &table[sb] <= &table[s as usize] + &table[sab] {
                    return Err(Error::NotStrictlySubmodular(format!(
                        "fails at S = {set}, a = {a}, b = {b}"
                    )));
                }
            }
        }
    }
    let mut f = PlFunction::new();
    for flat in m.lattice().proper_flats() {
        f.set(RayLabel::Flat(flat), table[flat.0 as usize].clone());
    }
    for i in 0..n {
        f.set(RayLabel::Element(i), table[1 << i].clone());
    }
    Ok(f)
}

/// Outcome of the convexity LP around one cone: the largest `s ≤ 1` such
/// that some linear `m` agrees with `ℓ` on the cone and `ℓ - m ≥ s` on its
/// link, together with that `m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Convexity {
    pub margin: Q,
    pub witness: Vec<Q>,
}

impl Convexity {
    pub fn is_convex(&self) -> bool {
        !self.margin.is_negative()
    }

    pub fn is_strict(&self) -> bool {
        self.margin.is_positive()
    }
}

pub fn convexity_around(fan: &BergmanFan, values: &[Q], cone: ConeId) -> Convexity {
    let d = fan.ambient_dim();
    let rays = fan.cone(cone);
    let a: Matrix = rays.iter().map(|&r| fan.ray_vector(r).iter().map(|&x| q(x)).collect()).collect();
    let b: Vec<Q> = rays.iter().map(|&r| values[r].clone()).collect();
    // cone rays are independent, so a solution exists
    let m0 = solve(&a, &b, d).unwrap_or_else(|| vec![Q::zero(); d]);
    let kernel = nullspace(&a, d);
    let k = kernel.len();
    let mut constraints = Vec::new();
    for &(f, _) in fan.link(cone) {
        let e = fan.ray_vector(f);
        let mut row: Vec<Q> = kernel.iter().map(|v| pairing(e, v)).collect();
        row.push(q(1));
        constraints.push((row, &values[f] - pairing(e, &m0)));
    }
    let mut cap = vec![Q::zero(); k];
    cap.push(q(1));
    constraints.push((cap.clone(), q(1)));
    let mut objective = vec![Q::zero(); k];
    objective.push(q(1));
    match maximize(&objective, &constraints) {
        LpOutcome::Optimal { value, point } => {
            let mut witness = m0;
            for (y, v) in point.iter().zip(&kernel) {
                for (w, x) in witness.iter_mut().zip(v) {
                    *w += y * x;
                }
            }
            debug_assert!(rays.iter().all(|&r| pairing(fan.ray_vector(r), &witness) == values[r]));
            Convexity { margin: value, witness }
        }
        other => unreachable!("convexity LP is feasible and bounded, got {other:?}"),
    }
}

pub fn is_convex_around(fan: &BergmanFan, ell: &PlFunction, cone: ConeId, strict: bool) -> bool {
    let c = convexity_around(fan, &ell.on(fan), cone);
    if strict {
        c.is_strict()
    } else {
        c.is_convex()
    }
}

/// The smallest cone id around which `ell` fails to be (strictly) convex.
pub fn first_nonconvex_cone(fan: &BergmanFan, ell: &PlFunction, strict: bool) -> Option<ConeId> {
    let values = ell.on(fan);
    (0..fan.num_cones())
        .into_par_iter()
        .filter(|&c| {
            let r = convexity_around(fan, &values, c);
            if strict {
                !r.is_strict()
            } else {
                !r.is_convex()
            }
        })
        .min()
}

pub fn is_ample(fan: &BergmanFan, ell: &PlFunction) -> bool {
    first_nonconvex_cone(fan, ell, true).is_none()
}

/// Value of `ℓ - m` at every ray, for a witness `m`.
pub fn normalized(fan: &BergmanFan, values: &[Q], m: &[Q]) -> Vec<Q> {
    (0..fan.num_rays()).map(|r| &values[r] - pairing(fan.ray_vector(r), m)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{build_fan, OrderFilter};
    use crate::matroid::catalog;
    use proptest::prelude::*;

    #[test]
    fn default_class_is_ample_on_catalog_fans() {
        for name in ["u23", "u34", "boolean3", "fano", "k4"] {
            let m = catalog::get(name).unwrap();
            let ell = submodular_to_class(&m, default_submodular(m.size())).unwrap();
            for p in [OrderFilter::full(&m), OrderFilter::empty(), OrderFilter::rank_at_least(&m, 2)] {
                let fan = build_fan(&m, &p, false).unwrap();
                assert!(is_ample(&fan, &ell), "{name} {}", p.descriptor(&m));
            }
        }
    }

    #[test]
    fn rank_function_is_rejected() {
        let m = catalog::fano();
        let r = |s: Subset| q(m.rank_of(s) as i64);
        assert!(matches!(submodular_to_class(&m, r), Err(Error::NotStrictlySubmodular(_))));
        let two = crate::matroid::Matroid::uniform(1, 2).unwrap();
        assert!(submodular_to_class(&two, |_| q(1)).is_ok());
    }

    #[test]
    fn linear_functions_are_convex_not_strict() {
        let m = catalog::get("u34").unwrap();
        let fan = build_fan(&m, &OrderFilter::full(&m), false).unwrap();
        let ell = PlFunction::linear(&fan, &[q(2), q(-1), q(5)]);
        for c in 0..fan.num_cones() {
            let r = convexity_around(&fan, &ell.on(&fan), c);
            assert!(r.is_convex());
            assert_eq!(r.is_strict(), fan.is_maximal(c), "cone {c}");
        }
    }

    fn boolean_fan_oracle(n: usize, c: &[i64]) -> bool {
        // strict submodularity of the values, with the empty and full sets at 0
        let full = (1usize << n) - 1;
        let v = |s: usize| if s == 0 || s == full { 0 } else { c[s] };
        (0..=full).all(|s| {
            (0..n).filter(|a| s >> a & 1 == 0).all(|a| {
                (a + 1..n)
                    .filter(|b| s >> b & 1 == 0)
                    .all(|b| v(s | 1 << a) + v(s | 1 << b) > v(s) + v(s | 1 << a | 1 << b))
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn permutohedral_convexity_matches_submodularity(c in proptest::collection::vec(-4i64..12, 8)) {
            let b = crate::matroid::Matroid::boolean(3).unwrap();
            let fan = build_fan(&b, &OrderFilter::full(&b), false).unwrap();
            let ell = PlFunction::from_pairs(
                (1..7u32).map(|s| (RayLabel::Flat(Subset(s)), q(c[s as usize]))),
            );
            prop_assert_eq!(is_ample(&fan, &ell), boolean_fan_oracle(3, &c));
        }
    }
}
