//! Abstract simplicial fans with explicit ray vectors, used to check that
//! flips of Bergman fans are stellar subdivisions.

use std::collections::BTreeSet;

use super::BergmanFan;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SimplicialFan {
    rays: Vec<Vec<i64>>,
    /// Every cone, closed under taking faces, as sorted ray indices.
    cones: BTreeSet<Vec<usize>>,
}

fn faces(cone: &[usize]) -> impl Iterator<Item = Vec<usize>> + '_ {
    (0..1u32 << cone.len()).map(move |mask| {
        cone.iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .map(|(_, &r)| r)
            .collect()
    })
}

impl SimplicialFan {
    pub fn new(rays: Vec<Vec<i64>>, maximal: &[Vec<usize>]) -> SimplicialFan {
        let mut cones = BTreeSet::new();
        for c in maximal {
            let mut c = c.clone();
            c.sort_unstable();
            cones.extend(faces(&c));
        }
        cones.insert(Vec::new());
        SimplicialFan { rays, cones }
    }

    pub fn from_bergman(fan: &BergmanFan) -> SimplicialFan {
        SimplicialFan {
            rays: (0..fan.num_rays()).map(|r| fan.ray_vector(r).to_vec()).collect(),
            cones: (0..fan.num_cones()).map(|c| fan.cone(c).to_vec()).collect(),
        }
    }

    pub fn num_cones(&self) -> usize {
        self.cones.len()
    }

    pub fn maximal_cones(&self) -> Vec<Vec<usize>> {
        self.cones
            .iter()
            .filter(|c| {
                !self
                    .cones
                    .iter()
                    .any(|d| d.len() == c.len() + 1 && c.iter().all(|x| d.contains(x)))
            })
            .cloned()
            .collect()
    }

    fn ray_of(&mut self, v: Vec<i64>) -> usize {
        match self.rays.iter().position(|w| *w == v) {
            Some(k) => k,
            None => {
                self.rays.push(v);
                self.rays.len() - 1
            }
        }
    }

    /// Stellar subdivision along `cone`: add the ray through the sum of its
    /// generators and replace every cone `τ ⊇ σ` by the joins `ρ + v` for
    /// faces `ρ` of `τ` not containing `σ`.
    pub fn stellar_subdivide(&self, cone: &[usize]) -> Result<SimplicialFan> {
        let mut sigma = cone.to_vec();
        sigma.sort_unstable();
        if !self.cones.contains(&sigma) || sigma.is_empty() {
            return Err(Error::ConeNotInFan(format!("{sigma:?}")));
        }
        if sigma.len() == 1 {
            return Ok(self.clone());
        }
        let dim = self.rays[0].len();
        let v: Vec<i64> = (0..dim).map(|k| sigma.iter().map(|&r| self.rays[r][k]).sum()).collect();
        let mut out = self.clone();
        let new = out.ray_of(v);
        let containing: Vec<Vec<usize>> =
            self.cones.iter().filter(|t| sigma.iter().all(|x| t.contains(x))).cloned().collect();
        for tau in &containing {
            out.cones.remove(tau);
        }
        for tau in &containing {
            for rho in faces(tau) {
                if sigma.iter().all(|x| rho.contains(x)) {
                    continue;
                }
                let mut c = rho;
                c.push(new);
                c.sort_unstable();
                out.cones.insert(c);
            }
        }
        Ok(out)
    }

    /// Cones as sets of ray vectors, independent of ray numbering.
    fn geometric(&self) -> BTreeSet<BTreeSet<Vec<i64>>> {
        self.cones
            .iter()
            .map(|c| c.iter().map(|&r| self.rays[r].clone()).collect())
            .collect()
    }

    pub fn same_as(&self, other: &SimplicialFan) -> bool {
        self.geometric() == other.geometric()
    }

    pub fn is_subfan_of(&self, other: &SimplicialFan) -> bool {
        self.geometric().is_subset(&other.geometric())
    }

    /// Ray index with this vector, if present.
    pub fn find_ray(&self, v: &[i64]) -> Option<usize> {
        self.rays.iter().position(|w| w == v)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::{build_fan, lattice_vector, OrderFilter};
    use crate::matroid::Matroid;
    use crate::subset::Subset;

    fn center(fan: &SimplicialFan, n: usize, z: Subset) -> Vec<usize> {
        z.iter().map(|i| fan.find_ray(&lattice_vector(n, Subset::singleton(i))).unwrap()).collect()
    }

    #[test]
    fn boolean_three_subdivides_to_permutohedral() {
        let b = Matroid::boolean(3).unwrap();
        let mut fan = SimplicialFan::from_bergman(&build_fan(&b, &OrderFilter::empty(), false).unwrap());
        let mut p = OrderFilter::empty();
        while let Some(&z) = p.maximal_missing(&b).last() {
            fan = fan.stellar_subdivide(&center(&fan, 3, z)).unwrap();
            p = p.with(&b, z).unwrap();
            let expected = SimplicialFan::from_bergman(&build_fan(&b, &p, false).unwrap());
            assert!(fan.same_as(&expected), "after adding {z}");
        }
        assert_eq!(fan.maximal_cones().len(), 6);
    }

    #[test]
    fn ray_subdivision_is_identity() {
        let b = Matroid::boolean(3).unwrap();
        let fan = SimplicialFan::from_bergman(&build_fan(&b, &OrderFilter::empty(), false).unwrap());
        assert!(fan.stellar_subdivide(&[0]).unwrap().same_as(&fan));
        assert!(fan.stellar_subdivide(&[0, 1, 2]).is_err());
    }
}
