use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::subset::Subset;

/// An upward-closed family of nonempty proper flats, kept sorted by
/// `(rank, sorted element list)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderFilter {
    flats: Vec<Subset>,
    members: HashSet<Subset>,
}

impl OrderFilter {
    fn from_sorted(m: &Matroid, mut flats: Vec<Subset>) -> OrderFilter {
        flats.sort_by(|a, b| m.rank_of(*a).cmp(&m.rank_of(*b)).then_with(|| a.lex_cmp(*b)));
        flats.dedup();
        let members = flats.iter().copied().collect();
        OrderFilter { flats, members }
    }

    /// Validate and wrap a family of flats.
    pub fn new(m: &Matroid, flats: &[Subset]) -> Result<OrderFilter> {
        let filter = OrderFilter::from_sorted(m, flats.to_vec());
        let lattice = m.lattice();
        let top = m.rank();
        for &f in &filter.flats {
            let r = lattice.rank_of(f).ok_or(Error::NotAFlat(f))?;
            if r == 0 || r == top {
                return Err(Error::NotAnOrderFilter(format!("{f} is not a nonempty proper flat")));
            }
            for &g in lattice.covers(f) {
                if g != m.ground() && !filter.contains(g) {
                    return Err(Error::NotAnOrderFilter(format!("{f} is present but its cover {g} is not")));
                }
            }
        }
        Ok(filter)
    }

    /// All nonempty proper flats.
    pub fn full(m: &Matroid) -> OrderFilter {
        OrderFilter::from_sorted(m, m.lattice().proper_flats())
    }

    pub fn empty() -> OrderFilter {
        OrderFilter { flats: Vec::new(), members: HashSet::new() }
    }

    /// Nonempty proper flats of rank at least `k`.
    pub fn rank_at_least(m: &Matroid, k: usize) -> OrderFilter {
        let flats = m.lattice().proper_flats().into_iter().filter(|&f| m.rank_of(f) >= k).collect();
        OrderFilter::from_sorted(m, flats)
    }

    /// `P ∪ {z}`, requiring `z` to be maximal among proper flats outside `P`.
    pub fn with(&self, m: &Matroid, z: Subset) -> Result<OrderFilter> {
        if self.contains(z) {
            return Err(Error::NotAnOrderFilter(format!("{z} is already in the filter")));
        }
        let mut flats = self.flats.clone();
        flats.push(z);
        OrderFilter::new(m, &flats)
    }

    pub fn flats(&self) -> &[Subset] {
        &self.flats
    }

    pub fn len(&self) -> usize {
        self.flats.len()
    }

    pub fn is_empty(&self) -> bool {
        self.flats.is_empty()
    }

    pub fn contains(&self, f: Subset) -> bool {
        self.members.contains(&f)
    }

    /// Proper flats outside the filter whose covers all lie in `P ∪ {E}`,
    /// i.e. the admissible centers of a flip, in filter order.
    pub fn maximal_missing(&self, m: &Matroid) -> Vec<Subset> {
        let lattice = m.lattice();
        let full = OrderFilter::full(m);
        full.flats
            .iter()
            .copied()
            .filter(|&f| !self.contains(f))
            .filter(|&f| lattice.covers(f).iter().all(|&g| g == m.ground() || self.contains(g)))
            .collect()
    }

    pub fn descriptor(&self, m: &Matroid) -> String {
        if self.is_empty() {
            "empty".into()
        } else if self.len() == m.lattice().proper_flats().len() {
            "full".into()
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for OrderFilter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.flats.iter().map(ToString::to_string).collect();
        write!(f, "[{}]", parts.join(" "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::catalog;

    #[test]
    fn upward_closure_is_enforced() {
        let fano = catalog::fano();
        let point = Subset::singleton(0);
        assert!(OrderFilter::new(&fano, &[point]).is_err());
        let line = Subset::from_elements([0, 1, 2]);
        assert!(OrderFilter::new(&fano, &[line]).is_ok());
        assert!(OrderFilter::new(&fano, &[Subset::from_elements([0, 1])]).is_err());
        assert!(OrderFilter::new(&fano, &[fano.ground()]).is_err());
    }

    #[test]
    fn maximal_missing_grows_to_full() {
        let m = Matroid::uniform(3, 4).unwrap();
        let mut p = OrderFilter::empty();
        assert_eq!(p.maximal_missing(&m).len(), 6);
        while let Some(&z) = p.maximal_missing(&m).last() {
            p = p.with(&m, z).unwrap();
        }
        assert_eq!(p, OrderFilter::full(&m));
        assert_eq!(OrderFilter::rank_at_least(&m, 2).len(), 6);
    }
}
