use std::collections::HashSet;

use super::{lattice_vector, BergmanFan, OrderFilter, RayLabel};
use crate::error::{Error, Result};
use crate::matroid::Minor;
use crate::subset::Subset;

/// The star of a ray, identified with a product of Bergman fans.
///
/// For a flat ray `e_F` the factors are `Σ_{M^F, P^F}` and `Σ_{M_F}`; for an
/// element ray `e_i` the single factor is `Σ_{M_{i}, P_{i}}`. Each factor
/// lives on a minor whose ground set is listed by `labels`.
#[derive(Clone, Debug)]
pub struct Star {
    pub factors: Vec<BergmanFan>,
    pub labels: Vec<Vec<usize>>,
    /// Number of cones of the original fan containing the ray.
    pub cone_count: usize,
}

impl BergmanFan {
    /// Build the star of a ray and verify the cone-by-cone bijection with the
    /// product fan under the quotient `N_E / <e_ray>`.
    pub fn star(&self, label: RayLabel) -> Result<Star> {
        let ray = self.ray(label).ok_or_else(|| Error::RayNotInFan(label.to_string()))?;
        let m = self.matroid();
        let containing: Vec<usize> = (0..self.num_cones()).filter(|&c| self.cone(c).contains(&ray)).collect();
        let (minors, filters) = match label {
            RayLabel::Flat(f) => {
                let below = m.restriction(f)?;
                let above = m.contraction(f)?;
                let flats: Vec<Subset> = self
                    .filter()
                    .flats()
                    .iter()
                    .filter(|g| g.is_proper_subset_of(f))
                    .map(|&g| below.project(g))
                    .collect();
                let filters = vec![OrderFilter::new(&below.matroid, &flats)?, OrderFilter::full(&above.matroid)];
                (vec![below, above], filters)
            }
            RayLabel::Element(i) => {
                let point = Subset::singleton(i);
                let above = m.contraction(point)?;
                let flats: Vec<Subset> = self
                    .filter()
                    .flats()
                    .iter()
                    .filter(|g| g.contains(i))
                    .map(|&g| above.project(g))
                    .collect();
                let filters = vec![OrderFilter::new(&above.matroid, &flats)?];
                (vec![above], filters)
            }
        };
        let factors: Vec<BergmanFan> = minors
            .iter()
            .zip(&filters)
            .map(|(minor, p)| BergmanFan::new(&minor.matroid, p, self.is_reduced()))
            .collect();
        let star = Star {
            labels: minors.iter().map(|mi| mi.labels.clone()).collect(),
            factors,
            cone_count: containing.len(),
        };
        star.verify(self, ray, &minors, &containing)?;
        Ok(star)
    }
}

impl Star {
    /// Image of a label of the big fan in one factor, or `None` if it maps
    /// to zero there.
    fn image(&self, minor: &Minor, s: Subset) -> Option<Subset> {
        let p = minor.project(s);
        let full = Subset::full(minor.labels.len());
        (p != Subset::EMPTY && p != full).then_some(p)
    }

    fn verify(&self, fan: &BergmanFan, ray: usize, minors: &[Minor], containing: &[usize]) -> Result<()> {
        let total: usize = self.factors.iter().map(BergmanFan::num_cones).product();
        if total != containing.len() {
            return Err(Error::FanPropertyViolation(format!(
                "star has {} cones but the product has {total}",
                containing.len()
            )));
        }
        let mut seen = HashSet::new();
        for &c in containing {
            let mut image = Vec::new();
            for (factor, minor) in self.factors.iter().zip(minors) {
                let mut rays = Vec::new();
                for &r in fan.cone(c).iter().filter(|&&r| r != ray) {
                    let label = fan.ray_label(r);
                    let set = match label {
                        RayLabel::Element(i) => Subset::singleton(i),
                        RayLabel::Flat(g) => g,
                    };
                    let Some(p) = self.image(minor, set) else {
                        continue;
                    };
                    let target = match label {
                        RayLabel::Element(_) => RayLabel::Element(p.min_element().expect("nonempty")),
                        RayLabel::Flat(_) => RayLabel::Flat(p),
                    };
                    let fr = factor.ray(target).ok_or_else(|| Error::RayNotInFan(target.to_string()))?;
                    if factor.ray_vector(fr) != lattice_vector(minor.labels.len(), p).as_slice() {
                        return Err(Error::FanPropertyViolation(format!("ray {label} maps off {target}")));
                    }
                    rays.push(fr);
                }
                let id = factor
                    .cone_id(&rays)
                    .ok_or_else(|| Error::ConeNotInFan(format!("image of {}", fan.describe_cone(c))))?;
                image.push(id);
            }
            if !seen.insert(image) {
                return Err(Error::FanPropertyViolation("star map is not injective".into()));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fan::build_fan;
    use crate::matroid::{catalog, Matroid};

    #[test]
    fn fano_star_at_a_line() {
        let fano = catalog::fano();
        let fan = build_fan(&fano, &OrderFilter::full(&fano), true).unwrap();
        let line = Subset::from_elements([0, 1, 2]);
        let star = fan.star(RayLabel::Flat(line)).unwrap();
        assert_eq!(star.factors.len(), 2);
        // restriction to a line is U(2,3): origin plus three rays
        assert_eq!(star.factors[0].num_cones(), 4);
        assert_eq!(star.factors[0].matroid(), &Matroid::uniform(2, 3).unwrap());
        // contraction by a line has rank 1: the fan is a point
        assert_eq!(star.factors[1].num_cones(), 1);
        assert_eq!(star.cone_count, 4);
    }

    #[test]
    fn star_at_an_element_ray() {
        let m = Matroid::uniform(3, 4).unwrap();
        let flats = [Subset::from_elements([0, 1]), Subset::from_elements([0, 2])];
        let p = OrderFilter::new(&m, &flats).unwrap();
        for reduced in [false, true] {
            let fan = build_fan(&m, &p, reduced).unwrap();
            for i in 0..4 {
                let star = fan.star(RayLabel::Element(i)).unwrap();
                assert_eq!(star.factors[0].matroid().rank(), 2);
                assert_eq!(star.factors[0].is_reduced(), reduced);
            }
            let star = fan.star(RayLabel::Flat(flats[0])).unwrap();
            assert_eq!(star.factors.len(), 2);
        }
    }

    #[test]
    fn missing_rays_are_rejected() {
        let m = Matroid::uniform(2, 3).unwrap();
        let fan = build_fan(&m, &OrderFilter::full(&m), false).unwrap();
        assert!(matches!(fan.star(RayLabel::Element(0)), Err(Error::RayNotInFan(_))));
    }
}
