//! Hard Lefschetz and Hodge–Riemann checks on Chow rings.
//!
//! `Q^q_ℓ(a, b) = (-1)^q deg(a ℓ^{r-2q} b)` on `A^q`. HL at level `q` is
//! nondegeneracy of `Q^q_ℓ`; HR is nondegeneracy together with the signature
//! `Σ_{p≤q} (-1)^{q-p} (dim A^p - dim A^{p-1})`.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chow::{ChowElement, ChowRing};
use crate::error::{Error, Result};
use crate::fan::pl::{first_nonconvex_cone, PlFunction};
use crate::fan::build_fan;
use crate::linalg::{determinant, mat_mul, nullspace, symmetric_signature, transpose, Matrix, Q};

#[cfg(test)]
mod tests;

/// A symmetric bilinear form on `A^q` in the ring's basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricForm {
    pub degree: usize,
    pub gram: Matrix,
    /// `(n₊, n₋, n₀)`.
    pub signature: (usize, usize, usize),
}

impl SymmetricForm {
    pub fn new(degree: usize, gram: Matrix) -> SymmetricForm {
        let signature = symmetric_signature(&gram);
        SymmetricForm { degree, gram, signature }
    }

    pub fn dim(&self) -> usize {
        self.gram.len()
    }

    pub fn is_symmetric(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (0..i).all(|j| self.gram[i][j] == self.gram[j][i]))
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.signature.2 == 0
    }

    /// Restriction to the row span of `basis` (rows in the ambient basis).
    pub fn restrict(&self, basis: &[Vec<Q>]) -> SymmetricForm {
        let n = self.dim();
        let b: Matrix = basis.to_vec();
        let bg = mat_mul(&b, &self.gram, n, n);
        let gram = mat_mul(&bg, &transpose(&b, n), n, b.len());
        SymmetricForm::new(self.degree, gram)
    }
}

/// Matrix of `a ↦ ℓ^{r-2q} a`, `A^q → A^{r-q}`; row `i` is the image of
/// the `i`-th basis element.
pub fn lefschetz_matrix(ring: &ChowRing, ell: &ChowElement, q: usize) -> Matrix {
    let r = ring.top();
    assert!(2 * q <= r, "Lefschetz operator needs q ≤ r/2");
    let l = ring.power(ell, r - 2 * q);
    (0..ring.dim(q))
        .into_par_iter()
        .map(|k| ring.coordinates(&ring.multiply(&l, &ChowElement::basis(q, k))))
        .collect()
}

/// `Q^q_ℓ` in the basis of `A^q`.
pub fn hodge_riemann_form(ring: &ChowRing, ell: &ChowElement, q: usize) -> Result<SymmetricForm> {
    let r = ring.top();
    if 2 * q > r {
        return Err(Error::WrongDegree { expected: r / 2, found: q });
    }
    let l = ring.power(ell, r - 2 * q);
    let dim = ring.dim(q);
    let sign = if q % 2 == 0 { Q::one() } else { -Q::one() };
    let images: Vec<ChowElement> =
        (0..dim).into_par_iter().map(|k| ring.multiply(&l, &ChowElement::basis(q, k))).collect();
    let gram: Result<Matrix> = (0..dim)
        .into_par_iter()
        .map(|i| {
            let a = ChowElement::basis(q, i);
            images.iter().map(|lb| Ok(ring.degree(&ring.multiply(&a, lb))? * &sign)).collect()
        })
        .collect();
    Ok(SymmetricForm::new(q, gram?))
}

/// Signature predicted by HR: `n₊ - n₋ = Σ_{p≤q} (-1)^{q-p} (h_p - h_{p-1})`
/// with `n₀ = 0`.
pub fn expected_signature(hilbert: &[usize], q: usize) -> (usize, usize, usize) {
    let (mut pos, mut neg) = (0, 0);
    for p in 0..=q {
        let prev = if p == 0 { 0 } else { hilbert[p - 1] };
        let gain = hilbert[p] - prev;
        if (q - p) % 2 == 0 {
            pos += gain;
        } else {
            neg += gain;
        }
    }
    (pos, neg, 0)
}

/// Rows spanning `P^q_ℓ = ker(ℓ^{r-2q+1}: A^q → A^{r-q+1})`.
pub fn primitive_basis(ring: &ChowRing, ell: &ChowElement, q: usize) -> Vec<Vec<Q>> {
    let r = ring.top();
    let dim = ring.dim(q);
    let l = ring.power(ell, r - 2 * q + 1);
    let target = r - q + 1;
    let tdim = ring.dim(target);
    // columns are images of basis elements
    let images: Vec<Vec<Q>> = (0..dim)
        .map(|k| ring.multiply(&l, &ChowElement::basis(q, k)).to_dense(tdim))
        .collect();
    nullspace(&transpose(&images, tdim), dim)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeLevel {
    pub q: usize,
    pub dim: usize,
    pub hl: bool,
    pub signature: [usize; 3],
    pub expected_signature: [usize; 3],
    pub hr: bool,
    pub primitive_dim: usize,
    /// `Q^q_ℓ` restricted to `P^q_ℓ` is positive definite.
    pub primitive_positive: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HodgeReport {
    pub matroid: String,
    pub filter: String,
    pub ell: String,
    /// Strict convexity was verified; false for nef-only runs.
    pub ample: bool,
    pub levels: Vec<HodgeLevel>,
}

impl HodgeReport {
    pub fn hl(&self) -> bool {
        self.levels.iter().all(|l| l.hl)
    }

    pub fn hr(&self) -> bool {
        self.levels.iter().all(|l| l.hr && l.primitive_positive)
    }
}

/// HL and HR at every `q ≤ r/2` for a degree-one class.
pub fn certify_element(ring: &ChowRing, ell: &ChowElement) -> Result<Vec<HodgeLevel>> {
    let r = ring.top();
    let hilbert = ring.hilbert_function();
    (0..=r / 2)
        .into_par_iter()
        .map(|q| {
            let form = hodge_riemann_form(ring, ell, q)?;
            let expected = expected_signature(&hilbert, q);
            let hl = form.is_nondegenerate();
            let primitive = primitive_basis(ring, ell, q);
            let restricted = form.restrict(&primitive);
            let primitive_positive = restricted.signature == (primitive.len(), 0, 0);
            Ok(HodgeLevel {
                q,
                dim: form.dim(),
                hl,
                signature: [form.signature.0, form.signature.1, form.signature.2],
                expected_signature: [expected.0, expected.1, expected.2],
                hr: hl && form.signature == expected,
                primitive_dim: primitive.len(),
                primitive_positive,
            })
        })
        .collect()
}

/// Certify a piecewise linear class. Strict convexity is checked on the
/// non-reduced fan of the ring's filter; with `nef_only` plain convexity is
/// accepted instead.
pub fn certify(
    ring: &ChowRing,
    ell: &PlFunction,
    matroid: &str,
    description: &str,
    nef_only: bool,
) -> Result<HodgeReport> {
    let m = ring.matroid();
    let filter = ring.fan().filter();
    let fan = build_fan(m, filter, false)?;
    let ample = match first_nonconvex_cone(&fan, ell, true) {
        None => true,
        Some(c) => {
            if !nef_only || first_nonconvex_cone(&fan, ell, false).is_some() {
                return Err(Error::NotAmple(format!("fails around {}", fan.describe_cone(c))));
            }
            false
        }
    };
    let element = ring.linear(ell);
    Ok(HodgeReport {
        matroid: matroid.to_string(),
        filter: filter.descriptor(m),
        ell: description.to_string(),
        ample,
        levels: certify_element(ring, &element)?,
    })
}

/// `C(n, k)`, zero outside `0..=n`.
fn binomial(n: i64, k: i64) -> BigInt {
    if k < 0 || k > n {
        return BigInt::zero();
    }
    let mut out = BigInt::one();
    for j in 0..k {
        out = out * (n - j) / (j + 1);
    }
    out
}

/// `[C(r₁+r₂-2q, r₁-i-j)]_{0≤i,j≤q}`, which represents `(-1)^q Q^q` on
/// `R[x₁,x₂]/(x₁^{r₁+1}, x₂^{r₂+1})` with `ℓ = x₁ + x₂`.
pub fn product_matrix(r1: usize, r2: usize, q: usize) -> Matrix {
    let n = (r1 + r2) as i64 - 2 * q as i64;
    (0..=q)
        .map(|i| (0..=q).map(|j| Q::from_integer(binomial(n, r1 as i64 - (i + j) as i64))).collect())
        .collect()
}

/// `(-1)^{q(q+1)/2} det > 0` for the product algebra.
pub fn product_hr_oracle(r1: usize, r2: usize, q: usize) -> bool {
    assert!(q <= r1 && r1 <= r2);
    let det = determinant(&product_matrix(r1, r2, q));
    if (q * (q + 1) / 2) % 2 == 0 {
        det.is_positive()
    } else {
        det.is_negative()
    }
}

/// `deg(ℓ₁ℓ₁ℓ₂^{r-2}) deg(ℓ₂ℓ₂ℓ₂^{r-2}) ≤ deg(ℓ₁ℓ₂ℓ₂^{r-2})²`.
pub fn nef_degree_inequality(ring: &ChowRing, l1: &ChowElement, l2: &ChowElement) -> Result<bool> {
    let r = ring.top();
    if r < 2 {
        return Err(Error::RankTooSmall { needed: 3, rank: r + 1 });
    }
    let tail = ring.power(l2, r - 2);
    let deg = |a: &ChowElement, b: &ChowElement| ring.degree(&ring.product(&[a.clone(), b.clone(), tail.clone()]));
    let a = deg(l1, l1)?;
    let b = deg(l2, l2)?;
    let c = deg(l1, l2)?;
    Ok(a * b <= &c * &c)
}

/// Characteristic polynomial `det(x I - A)`, coefficients from the constant
/// term up, by the Faddeev–LeVerrier recursion.
pub fn characteristic_polynomial(a: &Matrix) -> Vec<Q> {
    let n = a.len();
    let mut coeffs = vec![Q::zero(); n + 1];
    coeffs[n] = Q::one();
    let mut m: Matrix = vec![vec![Q::zero(); n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{n-k+1} I
        let mut next = mat_mul(a, &m, n, n);
        for (i, row) in next.iter_mut().enumerate() {
            row[i] += &coeffs[n - k + 1];
        }
        m = next;
        let am = mat_mul(a, &m, n, n);
        let trace: Q = (0..n).map(|i| am[i][i].clone()).sum();
        coeffs[n - k] = -trace / Q::from_integer(BigInt::from(k));
    }
    coeffs
}

fn sign_changes(coeffs: impl Iterator<Item = Q>) -> usize {
    let signs: Vec<bool> = coeffs.filter(|c| !c.is_zero()).map(|c| c.is_positive()).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Signature of a symmetric matrix from its characteristic polynomial: all
/// roots are real, so Descartes' rule of signs counts them exactly.
pub fn signature_by_descartes(a: &Matrix) -> (usize, usize, usize) {
    let p = characteristic_polynomial(a);
    let zero = p.iter().take_while(|c| c.is_zero()).count();
    let pos = sign_changes(p.iter().cloned());
    let neg = sign_changes(p.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -c.clone() } else { c.clone() }));
    (pos, neg, zero)
}
