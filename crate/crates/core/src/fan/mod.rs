//! Bergman fans `Σ_{M,P}` of order filters and their reduced subfans.
//!
//! Lattice coordinates: `N_E = Z^E / <e_E>` is identified with `Z^{n-1}` by
//! dropping `e_0`, so `e_0 = -(e_1 + ... + e_{n-1})` and `e_S = Σ_{i∈S} e_i`.

mod filter;
pub mod minkowski;
pub mod pl;
pub mod simplicial;
mod star;

use std::collections::HashMap;
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use filter::OrderFilter;
pub use star::Star;

use crate::error::{Error, Result};
use crate::linalg::{int_rank, q, smith_invariants};
use crate::lp::{maximize, LpOutcome};
use crate::matroid::Matroid;
use crate::subset::Subset;

/// Generator label of a ray: `e_i` for an element or `e_F` for a flat.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RayLabel {
    Element(usize),
    Flat(Subset),
}

impl fmt::Display for RayLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RayLabel::Element(i) => write!(f, "e{i}"),
            RayLabel::Flat(s) => write!(f, "e{s}"),
        }
    }
}

/// `e_S` in the coordinates of `N_E` for a ground set of size `n`.
pub fn lattice_vector(n: usize, s: Subset) -> Vec<i64> {
    let shift = if s.contains(0) { -1 } else { 0 };
    (1..n).map(|i| shift + i64::from(s.contains(i))).collect()
}

pub type ConeId = usize;

#[derive(Clone, Debug)]
pub struct BergmanFan {
    matroid: Matroid,
    filter: OrderFilter,
    reduced: bool,
    rays: Vec<RayLabel>,
    vectors: Vec<Vec<i64>>,
    ray_index: HashMap<RayLabel, usize>,
    cones: Vec<Vec<usize>>,
    cone_index: HashMap<Vec<usize>, ConeId>,
    dim_start: Vec<usize>,
    links: Vec<Vec<(usize, ConeId)>>,
}

/// JSON dump of a fan: labeled rays and cones grouped by dimension.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FanDump {
    pub reduced: bool,
    pub ambient_dim: usize,
    pub rays: Vec<RayDump>,
    pub cones_by_dim: Vec<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RayDump {
    pub label: RayLabel,
    pub vector: Vec<i64>,
}

/// Build and verify a Bergman fan: fan property, unimodularity, and purity
/// of dimension `r` for reduced fans.
pub fn build_fan(m: &Matroid, filter: &OrderFilter, reduced: bool) -> Result<BergmanFan> {
    let fan = BergmanFan::new(m, filter, reduced);
    fan.check_fan_property()?;
    fan.check_unimodular()?;
    if reduced && !fan.is_pure() {
        return Err(Error::FanPropertyViolation(format!(
            "reduced fan is not pure of dimension {}",
            m.rank() - 1
        )));
    }
    Ok(fan)
}

impl BergmanFan {
    /// Enumerate all cones `σ_{I<F}` without running the consistency checks.
    pub fn new(m: &Matroid, filter: &OrderFilter, reduced: bool) -> BergmanFan {
        let n = m.size();
        let ground = m.ground();
        let in_hat = |s: Subset| s == ground || filter.contains(s);
        // allowed[I] is true when cl(I) lies outside P ∪ {E}
        let allowed: Vec<bool> = (0..1u32 << n).map(|s| !in_hat(m.closure(Subset(s)))).collect();

        let mut rays = Vec::new();
        for i in 0..n {
            if allowed[1 << i] {
                rays.push(RayLabel::Element(i));
            }
        }
        let flats = filter.flats().to_vec();
        rays.extend(flats.iter().map(|&f| RayLabel::Flat(f)));
        let ray_index: HashMap<RayLabel, usize> = rays.iter().enumerate().map(|(k, &l)| (l, k)).collect();
        let vectors = rays
            .iter()
            .map(|l| match *l {
                RayLabel::Element(i) => lattice_vector(n, Subset::singleton(i)),
                RayLabel::Flat(f) => lattice_vector(n, f),
            })
            .collect();

        // chains in P, each with its minimum
        let mut chains: Vec<Vec<Subset>> = vec![Vec::new()];
        let mut frontier: Vec<Vec<Subset>> = vec![Vec::new()];
        while !frontier.is_empty() {
            let mut next = Vec::new();
            for chain in &frontier {
                for &f in &flats {
                    let extends = match chain.first() {
                        None => true,
                        Some(&lo) => f.is_proper_subset_of(lo),
                    };
                    if extends {
                        let mut c = vec![f];
                        c.extend_from_slice(chain);
                        next.push(c);
                    }
                }
            }
            chains.extend(next.iter().cloned());
            frontier = next;
        }

        let mut cones = Vec::new();
        for chain in &chains {
            let lo = chain.first().copied().unwrap_or(ground);
            let lo_rank = m.rank_of(lo);
            let flag_rays: Vec<usize> = chain.iter().map(|&f| ray_index[&RayLabel::Flat(f)]).collect();
            for i in lo.subsets() {
                if i == lo || !allowed[i.0 as usize] || (reduced && i.len() >= lo_rank) {
                    continue;
                }
                let mut cone: Vec<usize> = i.iter().map(|e| ray_index[&RayLabel::Element(e)]).collect();
                cone.extend_from_slice(&flag_rays);
                cone.sort_unstable();
                cones.push(cone);
            }
        }
        cones.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        cones.dedup();
        let cone_index: HashMap<Vec<usize>, ConeId> =
            cones.iter().enumerate().map(|(k, c)| (c.clone(), k)).collect();
        let top = cones.last().map_or(0, Vec::len);
        let mut dim_start = vec![0; top + 2];
        for k in 0..=top + 1 {
            dim_start[k] = cones.partition_point(|c| c.len() < k);
        }
        let mut links = vec![Vec::new(); cones.len()];
        for (id, cone) in cones.iter().enumerate() {
            for (pos, &f) in cone.iter().enumerate() {
                let mut facet = cone.clone();
                facet.remove(pos);
                links[cone_index[&facet]].push((f, id));
            }
        }
        for l in &mut links {
            l.sort_unstable();
        }
        BergmanFan {
            matroid: m.clone(),
            filter: filter.clone(),
            reduced,
            rays,
            vectors,
            ray_index,
            cones,
            cone_index,
            dim_start,
            links,
        }
    }

    pub fn matroid(&self) -> &Matroid {
        &self.matroid
    }

    pub fn filter(&self) -> &OrderFilter {
        &self.filter
    }

    pub fn is_reduced(&self) -> bool {
        self.reduced
    }

    /// Dimension of `N_E`, which is `|E| - 1`.
    pub fn ambient_dim(&self) -> usize {
        self.matroid.size() - 1
    }

    /// Largest cone dimension.
    pub fn dim(&self) -> usize {
        self.dim_start.len() - 2
    }

    pub fn num_rays(&self) -> usize {
        self.rays.len()
    }

    pub fn rays(&self) -> &[RayLabel] {
        &self.rays
    }

    pub fn ray_label(&self, ray: usize) -> RayLabel {
        self.rays[ray]
    }

    pub fn ray_vector(&self, ray: usize) -> &[i64] {
        &self.vectors[ray]
    }

    pub fn ray(&self, label: RayLabel) -> Option<usize> {
        self.ray_index.get(&label).copied()
    }

    pub fn element_ray(&self, i: usize) -> Option<usize> {
        self.ray(RayLabel::Element(i))
    }

    pub fn flat_ray(&self, f: Subset) -> Option<usize> {
        self.ray(RayLabel::Flat(f))
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    pub fn cone(&self, id: ConeId) -> &[usize] {
        &self.cones[id]
    }

    /// Id of the cone with exactly these rays (in any order).
    pub fn cone_id(&self, rays: &[usize]) -> Option<ConeId> {
        let mut key = rays.to_vec();
        key.sort_unstable();
        key.dedup();
        if key.len() != rays.len() {
            return None;
        }
        self.cone_index.get(&key).copied()
    }

    pub fn cones_of_dim(&self, k: usize) -> std::ops::Range<ConeId> {
        if k + 1 >= self.dim_start.len() {
            let end = self.cones.len();
            return end..end;
        }
        self.dim_start[k]..self.dim_start[k + 1]
    }

    pub fn count_of_dim(&self, k: usize) -> usize {
        self.cones_of_dim(k).len()
    }

    /// `(f, id of σ+f)` for every ray `f` in the link of `σ`.
    pub fn link(&self, id: ConeId) -> &[(usize, ConeId)] {
        &self.links[id]
    }

    pub fn is_maximal(&self, id: ConeId) -> bool {
        self.links[id].is_empty()
    }

    pub fn maximal_cones(&self) -> Vec<ConeId> {
        (0..self.cones.len()).filter(|&c| self.is_maximal(c)).collect()
    }

    pub fn is_pure(&self) -> bool {
        let r = self.matroid.rank() - 1;
        self.maximal_cones().iter().all(|&c| self.cones[c].len() == r)
    }

    pub fn cone_labels(&self, id: ConeId) -> Vec<RayLabel> {
        self.cones[id].iter().map(|&r| self.rays[r]).collect()
    }

    /// Describe a cone as `(I, flag)`.
    pub fn cone_parts(&self, id: ConeId) -> (Subset, Vec<Subset>) {
        let mut i = Subset::EMPTY;
        let mut flag = Vec::new();
        for label in self.cone_labels(id) {
            match label {
                RayLabel::Element(e) => i = i.with(e),
                RayLabel::Flat(f) => flag.push(f),
            }
        }
        flag.sort_by_key(|f| f.len());
        (i, flag)
    }

    pub fn describe_cone(&self, id: ConeId) -> String {
        let labels: Vec<String> = self.cone_labels(id).iter().map(ToString::to_string).collect();
        format!("cone{{{}}}", labels.join(", "))
    }

    fn cone_vectors(&self, rays: &[usize]) -> Vec<Vec<i64>> {
        rays.iter().map(|&r| self.vectors[r].clone()).collect()
    }

    /// Pairwise check on maximal cones that `U ∩ V` is the common face.
    ///
    /// If the rays of `U ∪ V` are independent the intersection is automatic;
    /// otherwise a separating functional (zero on the common rays, positive on
    /// `U` only, negative on `V` only) is found by exact LP.
    pub fn check_fan_property(&self) -> Result<()> {
        let maximal = self.maximal_cones();
        let pairs: Vec<(usize, usize)> = (0..maximal.len())
            .flat_map(|a| (a + 1..maximal.len()).map(move |b| (a, b)))
            .collect();
        let failure = pairs.par_iter().find_map_any(|&(a, b)| {
            let (u, v) = (&self.cones[maximal[a]], &self.cones[maximal[b]]);
            let common: Vec<usize> = u.iter().copied().filter(|x| v.contains(x)).collect();
            if self.cone_id(&common).is_none() {
                return Some(format!("common rays of two cones do not form a cone: {common:?}"));
            }
            let mut union = u.clone();
            union.extend(v.iter().copied().filter(|x| !u.contains(x)));
            if int_rank(&self.cone_vectors(&union)) == union.len() {
                return None;
            }
            if self.separated(u, v, &common) {
                None
            } else {
                Some(format!(
                    "{} and {} overlap beyond their common face",
                    self.describe_cone(maximal[a]),
                    self.describe_cone(maximal[b])
                ))
            }
        });
        match failure {
            Some(msg) => Err(Error::FanPropertyViolation(msg)),
            None => Ok(()),
        }
    }

    fn separated(&self, u: &[usize], v: &[usize], common: &[usize]) -> bool {
        let d = self.ambient_dim();
        let row = |r: usize, sign: i64| -> Vec<_> { self.vectors[r].iter().map(|&x| q(x * sign)).collect() };
        let mut cons = Vec::new();
        for &c in common {
            cons.push((row(c, 1), q(0)));
            cons.push((row(c, -1), q(0)));
        }
        for &x in u.iter().filter(|x| !common.contains(x)) {
            cons.push((row(x, -1), q(-1)));
        }
        for &x in v.iter().filter(|x| !common.contains(x)) {
            cons.push((row(x, 1), q(-1)));
        }
        maximize(&vec![q(0); d], &cons) != LpOutcome::Infeasible
    }

    /// Every maximal cone's rays extend to a lattice basis (all Smith
    /// invariants equal one).
    pub fn check_unimodular(&self) -> Result<()> {
        for id in self.maximal_cones() {
            if self.cones[id].is_empty() {
                continue;
            }
            let rows: Vec<Vec<num_bigint::BigInt>> = self.cones[id]
                .iter()
                .map(|&r| self.vectors[r].iter().map(|&x| x.into()).collect())
                .collect();
            let inv = smith_invariants(rows);
            if inv.len() != self.cones[id].len() || inv.iter().any(|d| *d != 1.into()) {
                return Err(Error::FanPropertyViolation(format!(
                    "{} is not unimodular",
                    self.describe_cone(id)
                )));
            }
        }
        Ok(())
    }

    pub fn dump(&self) -> FanDump {
        FanDump {
            reduced: self.reduced,
            ambient_dim: self.ambient_dim(),
            rays: self
                .rays
                .iter()
                .zip(&self.vectors)
                .map(|(&label, v)| RayDump { label, vector: v.clone() })
                .collect(),
            cones_by_dim: (0..=self.dim()).map(|k| self.cones_of_dim(k).map(|c| self.cones[c].clone()).collect()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::catalog;

    #[test]
    fn u23_full_fan_is_three_rays() {
        let m = Matroid::uniform(2, 3).unwrap();
        let fan = build_fan(&m, &OrderFilter::full(&m), false).unwrap();
        assert_eq!(fan.dim(), 1);
        assert_eq!(fan.count_of_dim(1), 3);
        let sum: Vec<i64> = (0..3).fold(vec![0, 0], |acc, r| {
            acc.iter().zip(fan.ray_vector(r)).map(|(a, b)| a + b).collect()
        });
        assert_eq!(sum, vec![0, 0]);
    }

    #[test]
    fn full_filter_top_cones_are_complete_flags() {
        let fano = catalog::fano();
        let fan = build_fan(&fano, &OrderFilter::full(&fano), false).unwrap();
        // 7 lines, each containing 3 points
        assert_eq!(fan.count_of_dim(2), 21);
        for c in fan.cones_of_dim(2) {
            let (i, flag) = fan.cone_parts(c);
            assert!(i.is_empty());
            assert_eq!(flag.len(), 2);
        }
        assert!(fan.is_pure());
    }

    #[test]
    fn empty_filter_reduced_is_simplex_skeleton() {
        let m = Matroid::uniform(3, 4).unwrap();
        let fan = build_fan(&m, &OrderFilter::empty(), true).unwrap();
        // r-skeleton of the normal fan of the 3-simplex: all 2-subsets of 4 rays
        assert_eq!(fan.num_rays(), 4);
        assert_eq!(fan.count_of_dim(2), 6);
        assert_eq!(fan.dim(), 2);
        // without the reduction, maximal cones are the independent sets of rank r
        let full = build_fan(&m, &OrderFilter::empty(), false).unwrap();
        assert_eq!(full.maximal_cones().len(), 6);
    }

    #[test]
    fn lattice_vectors_drop_e0() {
        assert_eq!(lattice_vector(4, Subset::singleton(0)), vec![-1, -1, -1]);
        assert_eq!(lattice_vector(4, Subset::from_elements([0, 2])), vec![-1, 0, -1]);
        assert_eq!(lattice_vector(4, Subset::full(4)), vec![0, 0, 0]);
    }
}
