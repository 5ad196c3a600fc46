//! Loopless matroids on at most [`MAX_GROUND`] elements, given by a fully
//! materialized rank table.

pub mod catalog;
mod json;
mod lattice;

use std::sync::{Arc, OnceLock};

pub use json::{EdgeList, MatroidSpec};
pub use lattice::FlatLattice;

use crate::error::{Error, Result};
use crate::poly::IntPolynomial;
use crate::subset::{Subset, MAX_GROUND};

/// How thoroughly the rank axioms were checked at construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validation {
    /// Every subset and every pair of added elements was checked; by the
    /// local form of submodularity this covers all pairs `(I, J)`.
    Exhaustive,
}

/// A rank table that has not been validated; intermediate matroids in the
/// free dual extension can have loops, so the plumbing lives here.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct RankTable {
    n: usize,
    ranks: Vec<u8>,
}

impl RankTable {
    fn from_fn(n: usize, mut f: impl FnMut(Subset) -> usize) -> RankTable {
        let ranks = (0..1u32 << n).map(|m| f(Subset(m)) as u8).collect();
        RankTable { n, ranks }
    }

    #[inline]
    fn rank(&self, s: Subset) -> usize {
        self.ranks[s.0 as usize] as usize
    }

    fn total(&self) -> usize {
        self.rank(Subset::full(self.n))
    }

    fn dual(&self) -> RankTable {
        let full = Subset::full(self.n);
        let r = self.total();
        RankTable::from_fn(self.n, |s| s.len() + self.rank(full.difference(s)) - r)
    }

    /// Free extension by a new element `n` in general position.
    fn free_extension(&self) -> RankTable {
        let n = self.n;
        let r = self.total();
        RankTable::from_fn(n + 1, |s| {
            let base = self.rank(s.without(n));
            if s.contains(n) {
                (base + 1).min(r)
            } else {
                base
            }
        })
    }

    fn validate(&self) -> Result<()> {
        let n = self.n;
        if self.rank(Subset::EMPTY) != 0 {
            return Err(Error::AxiomViolation("rank of the empty set is not 0".into()));
        }
        for m in 0..1u32 << n {
            let s = Subset(m);
            let rs = self.rank(s);
            for a in 0..n {
                if s.contains(a) {
                    continue;
                }
                let ra = self.rank(s.with(a));
                if ra != rs && ra != rs + 1 {
                    return Err(Error::AxiomViolation(format!(
                        "adding {a} to {s} changes the rank from {rs} to {ra}"
                    )));
                }
                for b in a + 1..n {
                    if s.contains(b) {
                        continue;
                    }
                    let rb = self.rank(s.with(b));
                    let rab = self.rank(s.with(a).with(b));
                    if ra + rb < rab + rs {
                        return Err(Error::AxiomViolation(format!(
                            "submodularity fails at {s} with elements {a}, {b}"
                        )));
                    }
                }
            }
        }
        if let Some(i) = (0..n).find(|&i| self.rank(Subset::singleton(i)) == 0) {
            return Err(Error::LoopPresent(i));
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
pub struct Matroid {
    table: RankTable,
    validation: Validation,
    lattice: Arc<OnceLock<FlatLattice>>,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.table == other.table
    }
}

impl Eq for Matroid {}

/// A minor together with the original label of each of its elements.
#[derive(Clone, Debug)]
pub struct Minor {
    pub matroid: Matroid,
    pub labels: Vec<usize>,
}

impl Minor {
    /// Translate a subset of the minor's ground set back to original labels.
    pub fn lift(&self, s: Subset) -> Subset {
        s.map(&self.labels)
    }

    /// Translate a subset of original labels (inside the minor) to minor labels.
    pub fn project(&self, s: Subset) -> Subset {
        Subset::from_elements(
            self.labels
                .iter()
                .enumerate()
                .filter(|(_, &l)| s.contains(l))
                .map(|(i, _)| i),
        )
    }
}

/// Result of [`Matroid::simplify`].
#[derive(Clone, Debug)]
pub struct Simplification {
    pub matroid: Matroid,
    /// `pi[i]` is the index of the rank-one flat containing element `i`.
    pub pi: Vec<usize>,
    /// `iota[j]` is the chosen representative of rank-one flat `j`.
    pub iota: Vec<usize>,
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_GROUND {
        return Err(Error::GroundSetSize { size: n, max: MAX_GROUND });
    }
    Ok(())
}

impl Matroid {
    fn from_table(table: RankTable) -> Result<Matroid> {
        check_size(table.n)?;
        table.validate()?;
        Ok(Matroid {
            table,
            validation: Validation::Exhaustive,
            lattice: Arc::new(OnceLock::new()),
        })
    }

    /// Build from an arbitrary rank function, validating every axiom.
    pub fn from_rank_fn(n: usize, f: impl FnMut(Subset) -> usize) -> Result<Matroid> {
        check_size(n)?;
        Matroid::from_table(RankTable::from_fn(n, f))
    }

    pub fn uniform(rank: usize, n: usize) -> Result<Matroid> {
        if rank > n {
            return Err(Error::Malformed(format!("uniform rank {rank} exceeds ground size {n}")));
        }
        Matroid::from_rank_fn(n, |s| s.len().min(rank))
    }

    pub fn boolean(n: usize) -> Result<Matroid> {
        Matroid::from_rank_fn(n, |s| s.len())
    }

    /// Cycle matroid of a multigraph: `rk(I) = |V| - components(V, I)`.
    pub fn graphic(vertices: usize, edges: &[(usize, usize)]) -> Result<Matroid> {
        check_size(edges.len())?;
        for (k, &(u, v)) in edges.iter().enumerate() {
            if u >= vertices || v >= vertices {
                return Err(Error::Malformed(format!(
                    "edge {k} = ({u}, {v}) uses a vertex outside 0..{vertices}"
                )));
            }
            if u == v {
                return Err(Error::LoopEdge(k));
            }
        }
        Matroid::from_rank_fn(edges.len(), |s| {
            let mut parent: Vec<usize> = (0..vertices).collect();
            fn find(p: &mut [usize], mut x: usize) -> usize {
                while p[x] != x {
                    p[x] = p[p[x]];
                    x = p[x];
                }
                x
            }
            let mut merged = 0;
            for e in s.iter() {
                let (a, b) = (find(&mut parent, edges[e].0), find(&mut parent, edges[e].1));
                if a != b {
                    parent[a] = b;
                    merged += 1;
                }
            }
            merged
        })
    }

    /// Build from the list of bases; `rk(I)` is the largest intersection with a basis.
    pub fn from_bases(n: usize, bases: &[Subset]) -> Result<Matroid> {
        check_size(n)?;
        let Some(first) = bases.first() else {
            return Err(Error::Malformed("empty basis list".into()));
        };
        let k = first.len();
        let full = Subset::full(n);
        for b in bases {
            if !b.is_subset_of(full) {
                return Err(Error::Malformed(format!("basis {b} is not inside the ground set")));
            }
            if b.len() != k {
                return Err(Error::Malformed(format!("bases {first} and {b} have different sizes")));
            }
        }
        let size = 1usize << n;
        let mut independent = vec![false; size];
        for b in bases {
            independent[b.0 as usize] = true;
        }
        for m in (0..size).rev() {
            if independent[m] {
                continue;
            }
            independent[m] = (0..n).any(|i| m >> i & 1 == 0 && independent[m | 1 << i]);
        }
        let mut ranks = vec![0u8; size];
        for m in 1..size {
            ranks[m] = if independent[m] {
                (m as u32).count_ones() as u8
            } else {
                (0..n).filter(|&i| m >> i & 1 == 1).map(|i| ranks[m & !(1 << i)]).max().unwrap_or(0)
            };
        }
        let matroid = Matroid::from_table(RankTable { n, ranks })?;
        let basis_count = full.subsets().filter(|&s| s.len() == k && matroid.rank_of(s) == k).count();
        let mut distinct = bases.to_vec();
        distinct.sort();
        distinct.dedup();
        if basis_count != distinct.len() {
            return Err(Error::AxiomViolation("basis family fails the exchange property".into()));
        }
        Ok(matroid)
    }

    /// Build from a family of flats. The family is closed under intersection
    /// and `E` is added; the result must reproduce exactly that family.
    pub fn from_flats(n: usize, flats: &[Subset]) -> Result<Matroid> {
        check_size(n)?;
        let full = Subset::full(n);
        let mut family: Vec<Subset> = flats.to_vec();
        if let Some(bad) = family.iter().find(|f| !f.is_subset_of(full)) {
            return Err(Error::Malformed(format!("flat {bad} is not inside the ground set")));
        }
        family.push(full);
        loop {
            family.sort();
            family.dedup();
            let mut added = false;
            let snapshot = family.clone();
            for (i, &a) in snapshot.iter().enumerate() {
                for &b in &snapshot[i + 1..] {
                    let c = a.intersection(b);
                    if family.binary_search(&c).is_err() {
                        family.push(c);
                        added = true;
                    }
                }
            }
            if !added {
                break;
            }
        }
        family.sort_by_key(|f| f.len());
        // rank of a flat = length of the longest chain below it
        let mut height = vec![0usize; family.len()];
        for i in 0..family.len() {
            height[i] = (0..i)
                .filter(|&j| family[j].is_proper_subset_of(family[i]))
                .map(|j| height[j] + 1)
                .max()
                .unwrap_or(0);
        }
        let matroid = Matroid::from_rank_fn(n, |s| {
            (0..family.len())
                .filter(|&i| s.is_subset_of(family[i]))
                .map(|i| height[i])
                .min()
                .expect("E contains every subset")
        })?;
        let mut produced = matroid.lattice().all_flats();
        produced.sort();
        family.sort();
        if produced != family {
            return Err(Error::AxiomViolation(
                "the given family is not the full lattice of flats of a matroid".into(),
            ));
        }
        Ok(matroid)
    }

    pub fn size(&self) -> usize {
        self.table.n
    }

    pub fn ground(&self) -> Subset {
        Subset::full(self.table.n)
    }

    /// `rk(E)`, which is `r + 1` in the grading of the Chow ring.
    pub fn rank(&self) -> usize {
        self.table.total()
    }

    #[inline]
    pub fn rank_of(&self, s: Subset) -> usize {
        self.table.rank(s)
    }

    pub fn corank_of(&self, s: Subset) -> usize {
        self.rank() - self.rank_of(s)
    }

    pub fn validation(&self) -> Validation {
        self.validation
    }

    pub fn closure(&self, s: Subset) -> Subset {
        let r = self.rank_of(s);
        (0..self.size())
            .filter(|&x| !s.contains(x) && self.rank_of(s.with(x)) == r)
            .fold(s, Subset::with)
    }

    pub fn is_flat(&self, s: Subset) -> bool {
        self.closure(s) == s
    }

    pub fn is_simple(&self) -> bool {
        let ground = self.ground();
        ground.subsets().filter(|s| s.len() == 2).all(|s| self.rank_of(s) == 2)
    }

    pub fn lattice(&self) -> &FlatLattice {
        self.lattice.get_or_init(|| FlatLattice::new(self))
    }

    /// χ_M(λ) = Σ_I (-1)^{|I|} λ^{crk(I)}.
    pub fn char_poly_subset_sum(&self) -> IntPolynomial {
        let mut c = vec![0i64; self.rank() + 1];
        for s in self.ground().subsets() {
            let sign = if s.len() % 2 == 0 { 1 } else { -1 };
            c[self.corank_of(s)] += sign;
        }
        IntPolynomial::new(c)
    }

    /// χ_M(λ) = Σ_F μ(∅, F) λ^{crk(F)}.
    pub fn char_poly_mobius(&self) -> IntPolynomial {
        let lattice = self.lattice();
        let mut c = vec![0i64; self.rank() + 1];
        for (k, flats) in lattice.flats_by_rank().iter().enumerate() {
            for &f in flats {
                c[self.rank() - k] += lattice.mobius(f);
            }
        }
        IntPolynomial::new(c)
    }

    pub fn char_poly(&self) -> IntPolynomial {
        self.char_poly_subset_sum()
    }

    /// χ_M(λ) / (λ - 1).
    pub fn reduced_char_poly(&self) -> Result<IntPolynomial> {
        let (q, rem) = self.char_poly().div_linear(1);
        if rem != 0 {
            return Err(Error::NonzeroRemainder);
        }
        Ok(q)
    }

    /// μ^0, ..., μ^r read off the reduced characteristic polynomial.
    pub fn mu_sequence(&self) -> Result<Vec<u64>> {
        let red = self.reduced_char_poly()?;
        let r = self.rank() - 1;
        (0..=r)
            .map(|k| {
                let c = red.coefficient(r - k);
                let expected_sign = if k % 2 == 0 { 1 } else { -1 };
                if c.signum() != expected_sign {
                    return Err(Error::RouteDisagreement(format!(
                        "coefficient of λ^{} in the reduced characteristic polynomial is {c}",
                        r - k
                    )));
                }
                Ok(c.unsigned_abs())
            })
            .collect()
    }

    /// w_k: absolute value of the λ^{r+1-k} coefficient of χ_M.
    pub fn whitney_numbers(&self) -> Vec<u64> {
        self.char_poly().abs_coefficients_descending()
    }

    /// f_k = number of independent sets of size k, for k = 0..=rk(E).
    pub fn independent_counts(&self) -> Vec<u64> {
        let mut f = vec![0u64; self.rank() + 1];
        for s in self.ground().subsets() {
            if self.rank_of(s) == s.len() {
                f[s.len()] += 1;
            }
        }
        f
    }

    fn require_flat(&self, f: Subset) -> Result<()> {
        if !f.is_subset_of(self.ground()) || !self.is_flat(f) {
            return Err(Error::NotAFlat(f));
        }
        Ok(())
    }

    /// The restriction `M^F` to a nonempty flat.
    pub fn restriction(&self, f: Subset) -> Result<Minor> {
        self.require_flat(f)?;
        let labels = f.to_vec();
        let matroid = Matroid::from_rank_fn(labels.len(), |s| self.rank_of(s.map(&labels)))?;
        Ok(Minor { matroid, labels })
    }

    /// The contraction `M_F` by a proper flat, on the ground set `E \ F`.
    pub fn contraction(&self, f: Subset) -> Result<Minor> {
        self.require_flat(f)?;
        let labels = self.ground().difference(f).to_vec();
        let base = self.rank_of(f);
        let matroid = Matroid::from_rank_fn(labels.len(), |s| self.rank_of(s.map(&labels).union(f)) - base)?;
        Ok(Minor { matroid, labels })
    }

    pub fn simplify(&self) -> Simplification {
        let atoms = self.lattice().flats_of_rank(1).to_vec();
        let mut pi = vec![0; self.size()];
        for (j, a) in atoms.iter().enumerate() {
            for i in a.iter() {
                pi[i] = j;
            }
        }
        let iota: Vec<usize> = atoms.iter().map(|a| a.min_element().expect("atoms are nonempty")).collect();
        let matroid = Matroid::from_rank_fn(atoms.len(), |s| {
            self.rank_of(s.iter().fold(Subset::EMPTY, |acc, j| acc.union(atoms[j])))
        })
        .expect("simplification of a valid matroid is valid");
        Simplification { matroid, pi, iota }
    }

    /// Relabel elements: element `i` becomes `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Matroid> {
        let n = self.size();
        let mut inverse = vec![usize::MAX; n];
        for (i, &p) in perm.iter().enumerate() {
            if p >= n || inverse[p] != usize::MAX {
                return Err(Error::Malformed("relabeling is not a permutation".into()));
            }
            inverse[p] = i;
        }
        if perm.len() != n {
            return Err(Error::Malformed("relabeling is not a permutation".into()));
        }
        Matroid::from_rank_fn(n, |s| self.rank_of(s.map(&inverse)))
    }

    /// The dual matroid; fails if `M` has a coloop.
    pub fn dual(&self) -> Result<Matroid> {
        Matroid::from_table(self.table.dual())
    }

    pub fn truncate(&self) -> Result<Matroid> {
        let r = self.rank();
        if r < 2 {
            return Err(Error::RankTooSmall { needed: 2, rank: r });
        }
        Matroid::from_rank_fn(self.size(), |s| self.rank_of(s).min(r - 1))
    }

    /// `M × p = (M* + p)*`, with the new element labeled `n`.
    pub fn free_dual_extension(&self) -> Result<Matroid> {
        let n = self.size();
        if n + 1 > MAX_GROUND {
            return Err(Error::SizeCapExceeded {
                what: "ground set of the free dual extension",
                value: n + 1,
                limit: MAX_GROUND,
            });
        }
        Matroid::from_table(self.table.dual().free_extension().dual())
    }

    /// Initial descending flags `D_k(M)`: `rk F_m = m` and
    /// `min F_1 > min F_2 > ... > min F_k > 0`. Element 0 is the distinguished element.
    pub fn descending_initial_flags(&self, k: usize) -> Vec<Vec<Subset>> {
        let mut out = Vec::new();
        if k == 0 || k >= self.rank() {
            return out;
        }
        let lattice = self.lattice();
        fn extend(lattice: &FlatLattice, k: usize, flag: &mut Vec<Subset>, out: &mut Vec<Vec<Subset>>) {
            if flag.len() == k {
                out.push(flag.clone());
                return;
            }
            let last = *flag.last().expect("flag starts nonempty");
            let bound = last.min_element().expect("flats in a flag are nonempty");
            for &g in lattice.covers(last) {
                let m = g.min_element().expect("nonempty");
                if m > 0 && m < bound {
                    flag.push(g);
                    extend(lattice, k, flag, out);
                    flag.pop();
                }
            }
        }
        for &a in lattice.flats_of_rank(1) {
            if a.min_element() > Some(0) {
                let mut flag = vec![a];
                extend(lattice, k, &mut flag, &mut out);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matroid::catalog;

    #[test]
    fn uniform_basics() {
        let m = Matroid::uniform(2, 3).unwrap();
        assert_eq!(m.rank(), 2);
        let counts: Vec<usize> = m.lattice().flats_by_rank().iter().map(Vec::len).collect();
        assert_eq!(counts, vec![1, 3, 1]);
        assert_eq!(m.closure(Subset::singleton(0)), Subset::singleton(0));
        assert_eq!(m.closure(m.ground()), m.ground());
    }

    #[test]
    fn loops_and_bad_tables_are_rejected() {
        assert_eq!(Matroid::uniform(0, 2).unwrap_err(), Error::LoopPresent(0));
        let err = Matroid::from_rank_fn(3, |s| if s.len() == 3 { 3 } else { s.len().min(1) }).unwrap_err();
        assert!(matches!(err, Error::AxiomViolation(_)));
        assert!(matches!(Matroid::boolean(17), Err(Error::GroundSetSize { .. })));
        assert_eq!(Matroid::graphic(2, &[(0, 1), (1, 1)]).unwrap_err(), Error::LoopEdge(1));
    }

    #[test]
    fn bases_exchange_is_enforced() {
        // {0,1} and {2,3} alone violate basis exchange
        let bad = [Subset::from_elements([0, 1]), Subset::from_elements([2, 3])];
        assert!(Matroid::from_bases(4, &bad).is_err());
        let pairs: Vec<Subset> = Subset::full(3).subsets().filter(|s| s.len() == 2).collect();
        assert_eq!(Matroid::from_bases(3, &pairs).unwrap(), Matroid::uniform(2, 3).unwrap());
    }

    #[test]
    fn flats_route_reproduces_fano() {
        let fano = catalog::fano();
        let flats = fano.lattice().all_flats();
        let rebuilt = Matroid::from_flats(7, &flats).unwrap();
        assert_eq!(rebuilt, fano);
        // the six remaining lines of Fano are not a full lattice
        let lines: Vec<Subset> = fano.lattice().flats_of_rank(2)[1..].to_vec();
        assert!(Matroid::from_flats(7, &lines).is_err());
    }

    #[test]
    fn graphic_k4() {
        let k4 = catalog::k4();
        assert_eq!(k4.size(), 6);
        assert_eq!(k4.rank(), 3);
    }

    #[test]
    fn contraction_of_fano_point() {
        let fano = catalog::fano();
        let c = fano.contraction(Subset::singleton(0)).unwrap();
        assert_eq!(c.matroid.size(), 6);
        assert_eq!(c.matroid.rank(), 2);
        let s = c.matroid.simplify();
        assert_eq!(s.matroid, Matroid::uniform(2, 3).unwrap());
        assert!(fano.contraction(Subset::from_elements([0, 1])).is_err());
    }

    #[test]
    fn parallel_elements_simplify() {
        // U_{2,3} with element 2 doubled as element 3
        let m = Matroid::from_rank_fn(4, |s| {
            let t = if s.contains(3) { s.without(3).with(2) } else { s };
            t.len().min(2)
        })
        .unwrap();
        let s = m.simplify();
        assert_eq!(s.matroid, Matroid::uniform(2, 3).unwrap());
        assert_eq!(s.pi, vec![0, 1, 2, 2]);
        assert_eq!(s.iota, vec![0, 1, 2]);
        let point = Matroid::uniform(1, 4).unwrap().simplify();
        assert_eq!(point.matroid, Matroid::boolean(1).unwrap());
    }

    #[test]
    fn dual_truncation_extension() {
        let u23 = Matroid::uniform(2, 3).unwrap();
        assert_eq!(u23.dual().unwrap(), Matroid::uniform(1, 3).unwrap());
        assert_eq!(Matroid::uniform(3, 4).unwrap().truncate().unwrap(), Matroid::uniform(2, 4).unwrap());
        assert_eq!(
            Matroid::uniform(1, 3).unwrap().truncate().unwrap_err(),
            Error::RankTooSmall { needed: 2, rank: 1 }
        );
        let ext = u23.free_dual_extension().unwrap();
        assert_eq!(ext.size(), 4);
        assert_eq!(ext.rank(), 3);
        assert!(Matroid::boolean(3).unwrap().dual().is_err());
    }

    #[test]
    fn descending_flags_of_small_matroids() {
        let u23 = Matroid::uniform(2, 3).unwrap();
        let d1 = u23.descending_initial_flags(1);
        assert_eq!(d1, vec![vec![Subset::singleton(1)], vec![Subset::singleton(2)]]);
        assert_eq!(catalog::fano().descending_initial_flags(2).len(), 8);
    }
}
