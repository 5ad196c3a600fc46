use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};

use super::Q;

/// Sparse rational vector keyed by column index.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SparseVec {
    entries: BTreeMap<usize, Q>,
}

impl SparseVec {
    pub fn new() -> Self {
        SparseVec::default()
    }

    pub fn from_dense(v: &[Q]) -> Self {
        SparseVec {
            entries: v
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(i, x)| (i, x.clone()))
                .collect(),
        }
    }

    pub fn from_pairs<I: IntoIterator<Item = (usize, Q)>>(pairs: I) -> Self {
        let mut v = SparseVec::new();
        for (i, x) in pairs {
            v.add_at(i, &x);
        }
        v
    }

    pub fn get(&self, i: usize) -> Q {
        self.entries.get(&i).cloned().unwrap_or_else(Q::zero)
    }

    pub fn add_at(&mut self, i: usize, x: &Q) {
        if x.is_zero() {
            return;
        }
        let e = self.entries.entry(i).or_insert_with(Q::zero);
        *e += x;
        if e.is_zero() {
            self.entries.remove(&i);
        }
    }

    /// `self += factor * other`.
    pub fn add_scaled(&mut self, other: &SparseVec, factor: &Q) {
        if factor.is_zero() {
            return;
        }
        for (&i, x) in &other.entries {
            self.add_at(i, &(x * factor));
        }
    }

    pub fn scale(&mut self, factor: &Q) {
        if factor.is_zero() {
            self.entries.clear();
            return;
        }
        for x in self.entries.values_mut() {
            *x *= factor;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn max_col(&self) -> Option<usize> {
        self.entries.keys().next_back().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.entries.iter().map(|(&i, x)| (i, x))
    }

    pub fn to_dense(&self, n: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); n];
        for (&i, x) in &self.entries {
            v[i] = x.clone();
        }
        v
    }
}

/// Incrementally built semi-echelon basis of a row space.
///
/// Each stored row is normalized so that its largest column carries a 1,
/// and no two rows share that leading column. Reducing a vector clears
/// every leading column, so the residual lives on the free columns, which
/// form the lexicographically smallest complement of the row space.
#[derive(Clone, Debug, Default)]
pub struct Echelon {
    rows: HashMap<usize, SparseVec>,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn is_pivot(&self, col: usize) -> bool {
        self.rows.contains_key(&col)
    }

    pub fn pivots(&self) -> Vec<usize> {
        let mut p: Vec<usize> = self.rows.keys().copied().collect();
        p.sort_unstable();
        p
    }

    /// Residual of `v` modulo the row space, supported off the pivot columns.
    pub fn reduce(&self, mut v: SparseVec) -> SparseVec {
        let mut bound = usize::MAX;
        loop {
            let next = v
                .entries
                .range(..bound)
                .rev()
                .find(|(c, _)| self.rows.contains_key(c))
                .map(|(&c, x)| (c, x.clone()));
            let Some((c, coeff)) = next else {
                return v;
            };
            v.add_scaled(&self.rows[&c], &-coeff);
            bound = c;
        }
    }

    /// Add a row; returns the new pivot column, or `None` if it was dependent.
    pub fn insert(&mut self, v: SparseVec) -> Option<usize> {
        let mut r = self.reduce(v);
        let c = r.max_col()?;
        let inv = r.get(c).recip();
        r.scale(&inv);
        debug_assert!(r.get(c).is_one());
        self.rows.insert(c, r);
        Some(c)
    }

    pub fn contains(&self, v: &SparseVec) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// Basis of the vectors annihilated by every stored row, one per free
    /// column among `0..cols`.
    pub fn kernel_basis(&self, cols: usize) -> Vec<Vec<Q>> {
        let pivots = self.pivots();
        (0..cols)
            .filter(|c| !self.rows.contains_key(c))
            .map(|free| {
                let mut v = vec![Q::zero(); cols];
                v[free] = Q::one();
                // a stored row is x_p + (terms below p), so solve pivots upward
                for &p in &pivots {
                    let mut acc = Q::zero();
                    for (c, a) in self.rows[&p].iter() {
                        if c != p && !v[c].is_zero() {
                            acc += a * &v[c];
                        }
                    }
                    v[p] = -acc;
                }
                v
            })
            .collect()
    }
}
