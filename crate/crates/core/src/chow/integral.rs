//! Integral structure: `A^q(Σ; Z)` is `Z^{cones}` modulo the integer
//! relation rows, and its torsion-free part is the lattice spanned by the
//! normal forms of the cone monomials.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::ChowRing;
use crate::error::Result;
use crate::linalg::{determinant, lattice_basis, mat_mul, smith_invariants, transpose, Matrix, Q};

impl ChowRing {
    /// A Z-basis (in basis coordinates) of the lattice generated by the
    /// cone monomials of degree `q`.
    pub fn integral_basis(&self, q: usize) -> Vec<Vec<Q>> {
        let dim = self.dim(q);
        let rows = self.cone_monomial_rows(q);
        let denom = rows
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let ints: Vec<Vec<BigInt>> = rows
            .iter()
            .map(|r| r.iter().map(|x| (x * Q::from_integer(denom.clone())).to_integer()).collect())
            .collect();
        lattice_basis(ints, dim)
            .into_iter()
            .map(|r| r.into_iter().map(|x| Q::new(x, denom.clone())).collect())
            .collect()
    }

    /// Whether `Z^{cones}` modulo the integer relations has no torsion.
    pub fn is_torsion_free(&self, q: usize) -> bool {
        let cols = self.fan().count_of_dim(q);
        let rows: Vec<Vec<BigInt>> = self
            .relations(q)
            .iter()
            .map(|r| {
                let mut v = vec![BigInt::zero(); cols];
                for (c, x) in r.iter() {
                    v[c] = x.to_integer();
                }
                v
            })
            .collect();
        let basis = lattice_basis(rows, cols);
        smith_invariants(basis).iter().all(One::is_one)
    }

    /// The pairing `A^q × A^{r-q} → Q` on integral bases.
    pub fn integral_pairing_matrix(&self, q: usize) -> Result<Matrix> {
        let r = self.top();
        let g = self.pairing_matrix(q)?;
        let left = self.integral_basis(q);
        let right = self.integral_basis(r - q);
        let (a, b) = (self.dim(q), self.dim(r - q));
        let lg = mat_mul(&left, &g, a, b);
        Ok(mat_mul(&lg, &transpose(&right, b), b, right.len()))
    }

    pub fn integral_pairing_determinant(&self, q: usize) -> Result<Q> {
        Ok(determinant(&self.integral_pairing_matrix(q)?))
    }
}
