//! Graded Chow rings `A*(Σ) ⊗ Q` of unimodular Bergman fans.
//!
//! Degree `q` is presented as the span of the square-free cone monomials
//! `x_σ`, `dim σ = q`, modulo the rows of [`balancing_rows`]. Every
//! monomial with higher exponents is rewritten into that span by repeated
//! substitution of a linear relation.

mod element;
mod identities;
mod integral;

use std::collections::{BTreeMap, HashMap};
use std::sync::{Mutex, OnceLock};

use num_traits::{One, Zero};
use rayon::prelude::*;

pub use element::ChowElement;
pub use identities::FundamentalClassReport;

use crate::error::{Error, Result};
use crate::fan::minkowski::balancing_rows;
use crate::fan::pl::{pairing, PlFunction};
use crate::fan::{build_fan, BergmanFan, ConeId, OrderFilter, RayLabel};
use crate::linalg::{nullspace, q, solve, Echelon, Matrix, SparseVec, Q};
use crate::matroid::Matroid;
use crate::subset::Subset;

/// Exponent vector as sorted `(ray, exponent)` pairs with positive exponents.
pub type Exponents = Vec<(usize, u32)>;

/// Which ray of largest exponent the rewriting step substitutes.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    #[default]
    SmallestRay,
    LargestRay,
}

/// Knobs of the rewriting procedure. The normal form does not depend on
/// them; they exist so that this can be tested.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ReduceOptions {
    pub tie: TieBreak,
    /// Coefficients (used cyclically) of a basis of `<support>^⊥` added to
    /// the substitution functional at every step.
    pub perturbation: Vec<i64>,
}

#[derive(Debug)]
struct DegreeData {
    echelon: Echelon,
    /// Free columns, as positions within `cones_of_dim(q)`.
    basis: Vec<usize>,
    index: HashMap<usize, usize>,
}

#[derive(Debug)]
pub struct ChowRing {
    fan: BergmanFan,
    data: Vec<OnceLock<DegreeData>>,
    top_degree: OnceLock<Q>,
    memo: Mutex<HashMap<Exponents, ChowElement>>,
}

impl ChowRing {
    pub fn new(fan: BergmanFan) -> ChowRing {
        let data = (0..=fan.dim() + 1).map(|_| OnceLock::new()).collect();
        ChowRing {
            fan,
            data,
            top_degree: OnceLock::new(),
            memo: Mutex::new(HashMap::new()),
        }
    }

    /// `A*(M) = A*(Σ_M)`, whose degree map sends every complete flag to 1.
    pub fn of_matroid(m: &Matroid) -> Result<ChowRing> {
        let fan = build_fan(m, &OrderFilter::full(m), true)?;
        let ring = ChowRing::new(fan);
        ring.set_top_degree(Q::one())?;
        Ok(ring)
    }

    pub fn fan(&self) -> &BergmanFan {
        &self.fan
    }

    pub fn matroid(&self) -> &Matroid {
        self.fan.matroid()
    }

    /// `r = rk(E) - 1`, the top degree.
    pub fn top(&self) -> usize {
        self.matroid().rank() - 1
    }

    fn data(&self, q: usize) -> Option<&DegreeData> {
        let cell = self.data.get(q)?;
        Some(cell.get_or_init(|| {
            let mut echelon = Echelon::new();
            for row in balancing_rows(&self.fan, q) {
                echelon.insert(row);
            }
            let basis: Vec<usize> =
                (0..self.fan.count_of_dim(q)).filter(|&c| !echelon.is_pivot(c)).collect();
            let index = basis.iter().enumerate().map(|(k, &c)| (c, k)).collect();
            DegreeData { echelon, basis, index }
        }))
    }

    pub fn dim(&self, q: usize) -> usize {
        self.data(q).map_or(0, |d| d.basis.len())
    }

    /// `dim A^q` for `q = 0..=max(r, dim Σ)`.
    pub fn hilbert_function(&self) -> Vec<usize> {
        let top = self.top().max(self.fan.dim());
        (0..=top).into_par_iter().map(|q| self.dim(q)).collect()
    }

    /// Relation rows in degree `q`, over `fan.cones_of_dim(q)`.
    pub fn relations(&self, q: usize) -> Vec<SparseVec> {
        balancing_rows(&self.fan, q)
    }

    /// Cone ids of the basis monomials of `A^q`.
    pub fn basis(&self, q: usize) -> Vec<ConeId> {
        let start = self.fan.cones_of_dim(q).start;
        self.data(q).map_or_else(Vec::new, |d| d.basis.iter().map(|&c| start + c).collect())
    }

    pub fn basis_cone(&self, q: usize, k: usize) -> ConeId {
        self.fan.cones_of_dim(q).start + self.data(q).expect("degree in range").basis[k]
    }

    pub fn zero(&self, q: usize) -> ChowElement {
        ChowElement::zero(q)
    }

    pub fn one(&self) -> ChowElement {
        ChowElement::from_coeffs(0, [(0, Q::one())])
    }

    /// Normal form of the square-free monomial `x_σ`.
    pub fn cone_monomial(&self, cone: ConeId) -> ChowElement {
        let q = self.fan.cone(cone).len();
        let Some(d) = self.data(q) else {
            return ChowElement::zero(q);
        };
        let col = cone - self.fan.cones_of_dim(q).start;
        if let Some(&k) = d.index.get(&col) {
            return ChowElement::from_coeffs(q, [(k, Q::one())]);
        }
        let residual = d.echelon.reduce(SparseVec::from_pairs([(col, Q::one())]));
        ChowElement::from_coeffs(q, residual.iter().map(|(c, x)| (d.index[&c], x.clone())))
    }

    /// Normal form of `Σ_σ v_σ x_σ` for a vector over `cones_of_dim(q)`.
    pub fn from_cone_vector(&self, q: usize, v: &SparseVec) -> ChowElement {
        let Some(d) = self.data(q) else {
            return ChowElement::zero(q);
        };
        let residual = d.echelon.reduce(v.clone());
        ChowElement::from_coeffs(q, residual.iter().map(|(c, x)| (d.index[&c], x.clone())))
    }

    /// Normal form of `Π x_e^{k_e}`.
    pub fn reduce(&self, exponents: &[(usize, u32)]) -> ChowElement {
        self.reduce_with(exponents, &ReduceOptions::default())
    }

    pub fn reduce_with(&self, exponents: &[(usize, u32)], opts: &ReduceOptions) -> ChowElement {
        let exps = normalize(exponents);
        let memoize = *opts == ReduceOptions::default();
        if memoize {
            if let Some(hit) = self.memo.lock().expect("memo lock").get(&exps) {
                return hit.clone();
            }
        }
        let out = self.rewrite(&exps, opts);
        if memoize {
            self.memo.lock().expect("memo lock").insert(exps, out.clone());
        }
        out
    }

    fn rewrite(&self, exps: &Exponents, opts: &ReduceOptions) -> ChowElement {
        let degree: usize = exps.iter().map(|&(_, k)| k as usize).sum();
        let support: Vec<usize> = exps.iter().map(|&(r, _)| r).collect();
        let Some(cone) = self.fan.cone_id(&support) else {
            return ChowElement::zero(degree);
        };
        if degree > self.fan.dim() {
            return ChowElement::zero(degree);
        }
        let top = exps.iter().map(|&(_, k)| k).max().unwrap_or(0);
        if top <= 1 {
            return self.cone_monomial(cone);
        }
        let candidates = exps.iter().filter(|&&(_, k)| k == top).map(|&(r, _)| r);
        let e = match opts.tie {
            TieBreak::SmallestRay => candidates.min(),
            TieBreak::LargestRay => candidates.max(),
        }
        .expect("nonempty support");
        let m = self.substitution(&support, e, &opts.perturbation);
        // x_e = Σ_{f ∈ link} <f, m> x_f, with all other support rays killed
        let mut rest = exps.clone();
        for p in rest.iter_mut() {
            if p.0 == e {
                p.1 -= 1;
            }
        }
        let mut out = ChowElement::zero(degree);
        for &(f, _) in self.fan.link(cone) {
            let c = pairing(self.fan.ray_vector(f), &m);
            if c.is_zero() {
                continue;
            }
            let mut next = rest.clone();
            next.push((f, 1));
            let term = self.reduce_with(&next, opts);
            out.add_scaled(&term, &c);
        }
        out
    }

    /// A functional `m` with `<e, m> = -1` and `<e', m> = 0` on the other
    /// support rays, plus the requested multiple of `<support>^⊥`.
    fn substitution(&self, support: &[usize], e: usize, perturbation: &[i64]) -> Vec<Q> {
        let d = self.fan.ambient_dim();
        let a: Matrix = support
            .iter()
            .map(|&r| self.fan.ray_vector(r).iter().map(|&x| q(x)).collect())
            .collect();
        let b: Vec<Q> = support.iter().map(|&r| if r == e { q(-1) } else { Q::zero() }).collect();
        let mut m = solve(&a, &b, d).expect("cone rays are independent");
        if !perturbation.is_empty() {
            for (k, v) in nullspace(&a, d).iter().enumerate() {
                let c = q(perturbation[k % perturbation.len()]);
                for (x, y) in m.iter_mut().zip(v) {
                    *x += &c * y;
                }
            }
        }
        m
    }

    /// Cone monomial exponents of a basis element.
    fn basis_exponents(&self, q: usize, k: usize) -> Exponents {
        self.fan.cone(self.basis_cone(q, k)).iter().map(|&r| (r, 1)).collect()
    }

    pub fn multiply(&self, a: &ChowElement, b: &ChowElement) -> ChowElement {
        let degree = a.degree() + b.degree();
        let mut out = ChowElement::zero(degree);
        if degree > self.fan.dim() {
            return out;
        }
        for (i, x) in a.terms() {
            let ei = self.basis_exponents(a.degree(), i);
            for (j, y) in b.terms() {
                let mut exps = ei.clone();
                exps.extend(self.basis_exponents(b.degree(), j));
                out.add_scaled(&self.reduce(&exps), &(x * y));
            }
        }
        out
    }

    pub fn power(&self, a: &ChowElement, k: usize) -> ChowElement {
        let mut out = self.one();
        for _ in 0..k {
            out = self.multiply(&out, a);
        }
        out
    }

    pub fn product(&self, factors: &[ChowElement]) -> ChowElement {
        factors.iter().fold(self.one(), |acc, f| self.multiply(&acc, f))
    }

    /// `Σ_e ℓ(e) x_e` in degree one.
    pub fn linear(&self, ell: &PlFunction) -> ChowElement {
        let start = self.fan.cones_of_dim(1).start;
        let v = SparseVec::from_pairs(
            ell.on(&self.fan)
                .into_iter()
                .enumerate()
                .map(|(r, x)| (self.fan.cone_id(&[r]).expect("rays are cones") - start, x)),
        );
        self.from_cone_vector(1, &v)
    }

    /// `x_e` for a generator label; zero if the label is not a ray here.
    pub fn variable(&self, label: RayLabel) -> ChowElement {
        match self.fan.ray(label) {
            Some(r) => self.cone_monomial(self.fan.cone_id(&[r]).expect("rays are cones")),
            None => ChowElement::zero(1),
        }
    }

    /// `Π x_e` over labels; zero if some label is not a ray.
    pub fn monomial(&self, labels: &[RayLabel]) -> ChowElement {
        let mut exps = Vec::new();
        for &l in labels {
            match self.fan.ray(l) {
                Some(r) => exps.push((r, 1)),
                None => return ChowElement::zero(labels.len()),
            }
        }
        self.reduce(&exps)
    }

    pub fn flag_monomial(&self, flag: &[Subset]) -> ChowElement {
        let labels: Vec<RayLabel> = flag.iter().map(|&f| RayLabel::Flat(f)).collect();
        self.monomial(&labels)
    }

    /// `α_{M,i} = Σ_{i ∈ F} x_F` over the flat rays.
    pub fn alpha(&self, i: usize) -> ChowElement {
        self.flat_sum(|f| f.contains(i))
    }

    /// `β_{M,i} = Σ_{i ∉ F} x_F` over the flat rays.
    pub fn beta(&self, i: usize) -> ChowElement {
        self.flat_sum(|f| !f.contains(i))
    }

    fn flat_sum(&self, keep: impl Fn(Subset) -> bool) -> ChowElement {
        let ell = PlFunction::from_pairs(
            self.fan
                .rays()
                .iter()
                .filter_map(|&l| match l {
                    RayLabel::Flat(f) if keep(f) => Some((l, Q::one())),
                    _ => None,
                }),
        );
        self.linear(&ell)
    }

    /// Attach the degree of the single basis monomial of `A^r`.
    pub fn set_top_degree(&self, value: Q) -> Result<()> {
        let dim = self.dim(self.top());
        if dim != 1 {
            return Err(Error::IdentityViolation(format!("dim A^r is {dim}, not 1")));
        }
        let _ = self.top_degree.set(value);
        Ok(())
    }

    pub fn has_degree_map(&self) -> bool {
        self.top_degree.get().is_some()
    }

    pub fn degree(&self, a: &ChowElement) -> Result<Q> {
        let r = self.top();
        if a.degree() != r {
            return Err(Error::WrongDegree { expected: r, found: a.degree() });
        }
        let scale = self.top_degree.get().ok_or(Error::DegreeUnavailable)?;
        Ok(a.coeff(0) * scale)
    }

    /// Gram matrix of `(a, b) ↦ deg(a b)` on the bases of `A^q × A^{r-q}`.
    pub fn pairing_matrix(&self, q: usize) -> Result<Matrix> {
        let r = self.top();
        if q > r {
            return Ok(Vec::new());
        }
        let left: Vec<ChowElement> = (0..self.dim(q)).map(|k| ChowElement::basis(q, k)).collect();
        let right: Vec<ChowElement> = (0..self.dim(r - q)).map(|k| ChowElement::basis(r - q, k)).collect();
        left.par_iter()
            .map(|a| right.iter().map(|b| self.degree(&self.multiply(a, b))).collect())
            .collect()
    }

    /// Coefficients of an element over the basis of its degree.
    pub fn coordinates(&self, a: &ChowElement) -> Vec<Q> {
        a.to_dense(self.dim(a.degree()))
    }

    /// Element with the given basis coordinates.
    pub fn from_coordinates(&self, q: usize, v: &[Q]) -> ChowElement {
        ChowElement::from_coeffs(q, v.iter().cloned().enumerate())
    }

    /// Sorted labels of a basis monomial, for reports.
    pub fn describe_basis(&self, q: usize) -> Vec<String> {
        self.basis(q).iter().map(|&c| self.fan.describe_cone(c)).collect()
    }

    /// Map each degree-`q` basis monomial to its exponent map by label.
    pub fn basis_labels(&self, q: usize, k: usize) -> Vec<RayLabel> {
        self.fan.cone_labels(self.basis_cone(q, k))
    }

    /// Normal forms of all cone monomials of degree `q`, as coordinate rows.
    pub fn cone_monomial_rows(&self, q: usize) -> Vec<Vec<Q>> {
        self.fan.cones_of_dim(q).map(|c| self.coordinates(&self.cone_monomial(c))).collect()
    }
}

fn normalize(exponents: &[(usize, u32)]) -> Exponents {
    let mut map: BTreeMap<usize, u32> = BTreeMap::new();
    for &(r, k) in exponents {
        if k > 0 {
            *map.entry(r).or_insert(0) += k;
        }
    }
    map.into_iter().collect()
}
