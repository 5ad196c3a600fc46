use std::collections::HashMap;

use super::Matroid;
use crate::subset::Subset;

/// The graded lattice of flats with covering relation and Möbius values μ(∅, F).
///
/// Within each rank, flats are ordered lexicographically by their sorted
/// element lists; every deterministic ordering downstream starts here.
#[derive(Clone, Debug)]
pub struct FlatLattice {
    by_rank: Vec<Vec<Subset>>,
    rank: HashMap<Subset, usize>,
    covers: HashMap<Subset, Vec<Subset>>,
    mobius: HashMap<Subset, i64>,
}

impl FlatLattice {
    pub(crate) fn new(m: &Matroid) -> FlatLattice {
        let mut by_rank = vec![Vec::new(); m.rank() + 1];
        let mut seen = vec![false; 1 << m.size()];
        for s in m.ground().subsets() {
            let f = m.closure(s);
            if !seen[f.0 as usize] {
                seen[f.0 as usize] = true;
                by_rank[m.rank_of(f)].push(f);
            }
        }
        for level in &mut by_rank {
            level.sort_by(|a, b| a.lex_cmp(*b));
        }
        let rank: HashMap<Subset, usize> = by_rank
            .iter()
            .enumerate()
            .flat_map(|(k, fs)| fs.iter().map(move |&f| (f, k)))
            .collect();
        let mut covers: HashMap<Subset, Vec<Subset>> = HashMap::new();
        for k in 0..by_rank.len() {
            for &f in &by_rank[k] {
                let up = by_rank
                    .get(k + 1)
                    .map(|next| next.iter().copied().filter(|g| f.is_subset_of(*g)).collect())
                    .unwrap_or_default();
                covers.insert(f, up);
            }
        }
        // μ(∅, ∅) = 1 and Σ_{G ⊆ F} μ(∅, G) = 0 for F ≠ ∅
        let mut mobius: HashMap<Subset, i64> = HashMap::new();
        for k in 0..by_rank.len() {
            for &f in &by_rank[k] {
                let value = if k == 0 {
                    1
                } else {
                    -by_rank[..k]
                        .iter()
                        .flatten()
                        .filter(|g| g.is_subset_of(f))
                        .map(|g| mobius[g])
                        .sum::<i64>()
                };
                mobius.insert(f, value);
            }
        }
        FlatLattice { by_rank, rank, covers, mobius }
    }

    pub fn flats_by_rank(&self) -> &[Vec<Subset>] {
        &self.by_rank
    }

    pub fn flats_of_rank(&self, k: usize) -> &[Subset] {
        self.by_rank.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn all_flats(&self) -> Vec<Subset> {
        self.by_rank.iter().flatten().copied().collect()
    }

    /// Nonempty proper flats, by rank and then lexicographically.
    pub fn proper_flats(&self) -> Vec<Subset> {
        let top = self.by_rank.len() - 1;
        self.by_rank[1..top].iter().flatten().copied().collect()
    }

    pub fn contains(&self, f: Subset) -> bool {
        self.rank.contains_key(&f)
    }

    pub fn rank_of(&self, f: Subset) -> Option<usize> {
        self.rank.get(&f).copied()
    }

    /// Flats covering `f`.
    pub fn covers(&self, f: Subset) -> &[Subset] {
        self.covers.get(&f).map_or(&[], Vec::as_slice)
    }

    pub fn mobius(&self, f: Subset) -> i64 {
        self.mobius[&f]
    }
}

#[cfg(test)]
mod tests {
    use crate::matroid::{catalog, Matroid};
    use crate::subset::Subset;

    #[test]
    fn flat_counts() {
        let counts = |m: &Matroid| m.lattice().flats_by_rank().iter().map(Vec::len).collect::<Vec<_>>();
        assert_eq!(counts(&catalog::fano()), vec![1, 7, 7, 1]);
        assert_eq!(counts(&Matroid::uniform(3, 4).unwrap()), vec![1, 4, 6, 1]);
        assert_eq!(counts(&Matroid::boolean(3).unwrap()), vec![1, 3, 3, 1]);
    }

    #[test]
    fn covers_partition_the_complement() {
        for m in [catalog::fano(), catalog::k4(), catalog::vamos()] {
            let l = m.lattice();
            for f in l.all_flats() {
                if f == m.ground() {
                    continue;
                }
                let mut union = Subset::EMPTY;
                let mut total = 0;
                for g in l.covers(f) {
                    let part = g.difference(f);
                    assert!(part.intersection(union).is_empty());
                    union = union.union(part);
                    total += part.len();
                }
                assert_eq!(union, m.ground().difference(f));
                assert_eq!(total, m.size() - f.len());
            }
        }
    }

    #[test]
    fn mobius_of_boolean_is_signed() {
        let b = Matroid::boolean(4).unwrap();
        for f in b.lattice().all_flats() {
            let sign = if f.len() % 2 == 0 { 1 } else { -1 };
            assert_eq!(b.lattice().mobius(f), sign);
        }
    }
}
