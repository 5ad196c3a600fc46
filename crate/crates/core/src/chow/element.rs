use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::linalg::Q;

/// A homogeneous class in normal form: coefficients over the basis
/// monomials of its degree. Zero terms are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChowElement {
    degree: usize,
    coeffs: BTreeMap<usize, Q>,
}

impl ChowElement {
    pub fn zero(degree: usize) -> ChowElement {
        ChowElement { degree, coeffs: BTreeMap::new() }
    }

    /// The `k`-th basis monomial of degree `degree`.
    pub fn basis(degree: usize, k: usize) -> ChowElement {
        ChowElement::from_coeffs(degree, [(k, Q::one())])
    }

    pub fn from_coeffs<I: IntoIterator<Item = (usize, Q)>>(degree: usize, coeffs: I) -> ChowElement {
        let mut e = ChowElement::zero(degree);
        for (k, x) in coeffs {
            e.add_term(k, &x);
        }
        e
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, k: usize) -> Q {
        self.coeffs.get(&k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (usize, &Q)> {
        self.coeffs.iter().map(|(&k, x)| (k, x))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    fn add_term(&mut self, k: usize, x: &Q) {
        if x.is_zero() {
            return;
        }
        let e = self.coeffs.entry(k).or_insert_with(Q::zero);
        *e += x;
        if e.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    /// `self += factor * other`; both must have the same degree.
    pub fn add_scaled(&mut self, other: &ChowElement, factor: &Q) {
        debug_assert_eq!(self.degree, other.degree);
        if factor.is_zero() {
            return;
        }
        for (&k, x) in &other.coeffs {
            self.add_term(k, &(x * factor));
        }
    }

    pub fn add(&self, other: &ChowElement) -> ChowElement {
        let mut out = self.clone();
        out.add_scaled(other, &Q::one());
        out
    }

    pub fn sub(&self, other: &ChowElement) -> ChowElement {
        let mut out = self.clone();
        out.add_scaled(other, &-Q::one());
        out
    }

    pub fn scale(&self, factor: &Q) -> ChowElement {
        let mut out = ChowElement::zero(self.degree);
        out.add_scaled(self, factor);
        out
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Q> {
        let mut v = vec![Q::zero(); dim];
        for (&k, x) in &self.coeffs {
            v[k] = x.clone();
        }
        v
    }
}
