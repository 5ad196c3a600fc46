//! Matroidal flips `Σ_{M,P₋} ⇝ Σ_{M,P₊}` with `P₊ = P₋ ∪ {Z}`: the pullback
//! `Φ_Z`, the Gysin maps `Ψ_Z^{p,q}` and `Γ_Z^{p,q}`, the decomposition
//! `A^q(P₊) = Φ A^q(P₋) ⊕ ⨁_{p<rk Z} Ψ^{p,q} A^{q-p}(M_Z)`, and transport of
//! ample classes across a flip.

use std::sync::Arc;

use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::chow::{ChowElement, ChowRing};
use crate::error::{Error, Result};
use crate::fan::pl::{convexity_around, first_nonconvex_cone, normalized, PlFunction};
use crate::fan::{build_fan, BergmanFan, ConeId, OrderFilter, RayLabel};
use crate::linalg::{rank, Q};
use crate::matroid::{Matroid, Minor};
use crate::subset::Subset;


/// How the next center is picked among the maximal flats outside the filter.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ChainOrder {
    /// Highest rank first, lexicographically smallest among equals.
    #[default]
    HighRankFirst,
    /// Highest rank first, lexicographically largest among equals.
    HighRankLast,
}

impl ChainOrder {
    pub fn pick(self, m: &Matroid, candidates: &[Subset]) -> Option<Subset> {
        let top = candidates.iter().map(|&f| m.rank_of(f)).max()?;
        let mut best = candidates.iter().copied().filter(|&f| m.rank_of(f) == top);
        match self {
            ChainOrder::HighRankFirst => best.next(),
            ChainOrder::HighRankLast => best.next_back(),
        }
    }
}

/// The sequence of order filters `∅ = P_0 ⊂ P_1 ⊂ ... ⊂ P_N = P(M)`.
pub fn chain_filters(m: &Matroid, order: ChainOrder) -> Vec<OrderFilter> {
    let mut filters = vec![OrderFilter::empty()];
    loop {
        let last = filters.last().expect("nonempty");
        let Some(z) = order.pick(m, &last.maximal_missing(m)) else {
            break;
        };
        let next = last.with(m, z).expect("maximal missing flats extend the filter");
        filters.push(next);
    }
    filters
}

/// One flip together with the four Chow rings it relates.
#[derive(Debug)]
pub struct FlipStep {
    center: Subset,
    minus: Arc<ChowRing>,
    plus: Arc<ChowRing>,
    contraction: Minor,
    contracted: Arc<ChowRing>,
    restriction: Minor,
    restricted: Arc<ChowRing>,
}

/// Per-degree data of the decomposition of `A^q(M,P₊)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeDecomposition {
    pub q: usize,
    pub dim_minus: usize,
    /// `dim A^{q-p}(M_Z)` for `p = 1..rk Z`.
    pub gysin: Vec<usize>,
    pub dim_plus: usize,
    /// Rank of the combined image.
    pub rank: usize,
    pub holds: bool,
}

impl FlipStep {
    /// The flip between two rings whose filters differ by one admissible center.
    pub fn new(minus: Arc<ChowRing>, plus: Arc<ChowRing>) -> Result<FlipStep> {
        let m = minus.matroid();
        let added: Vec<Subset> = plus
            .fan()
            .filter()
            .flats()
            .iter()
            .copied()
            .filter(|&f| !minus.fan().filter().contains(f))
            .collect();
        let [center] = added[..] else {
            return Err(Error::NotAnOrderFilter("filters do not differ by one flat".into()));
        };
        if plus.fan().filter().len() != minus.fan().filter().len() + 1
            || !minus.fan().filter().maximal_missing(m).contains(&center)
        {
            return Err(Error::NotAnOrderFilter(format!("{center} is not a flip center")));
        }
        let contraction = m.contraction(center)?;
        let contracted = Arc::new(ChowRing::of_matroid(&contraction.matroid)?);
        let restriction = m.restriction(center)?;
        let restricted = Arc::new(ChowRing::of_matroid(&restriction.matroid)?);
        Ok(FlipStep { center, minus, plus, contraction, contracted, restriction, restricted })
    }

    /// Build both rings from `P₋` and the center.
    pub fn from_filter(m: &Matroid, minus: &OrderFilter, center: Subset) -> Result<FlipStep> {
        let plus = minus.with(m, center)?;
        let minus = Arc::new(ChowRing::new(build_fan(m, minus, true)?));
        let plus = Arc::new(ChowRing::new(build_fan(m, &plus, true)?));
        FlipStep::new(minus, plus)
    }

    pub fn center(&self) -> Subset {
        self.center
    }

    pub fn matroid(&self) -> &Matroid {
        self.minus.matroid()
    }

    pub fn minus(&self) -> &ChowRing {
        &self.minus
    }

    pub fn plus(&self) -> &ChowRing {
        &self.plus
    }

    /// `A*(M_Z)`, on the contraction's own labels.
    pub fn contracted(&self) -> &ChowRing {
        &self.contracted
    }

    /// `A*(M^Z)`, on the restriction's own labels.
    pub fn restricted(&self) -> &ChowRing {
        &self.restricted
    }

    pub fn contraction(&self) -> &Minor {
        &self.contraction
    }

    pub fn restriction(&self) -> &Minor {
        &self.restriction
    }

    pub fn center_rank(&self) -> usize {
        self.matroid().rank_of(self.center)
    }

    fn center_ray(&self) -> usize {
        self.plus.fan().flat_ray(self.center).expect("the center is a ray after the flip")
    }

    /// `Φ_Z(a)`: `x_F ↦ x_F`, `x_i ↦ x_i + x_Z` for `i ∈ Z`, `x_i ↦ x_i` otherwise.
    pub fn pullback_phi(&self, a: &ChowElement) -> ChowElement {
        let plus = self.plus.fan();
        let z = self.center_ray();
        let mut out = ChowElement::zero(a.degree());
        for (k, c) in a.terms() {
            // each factor is a list of plus-side rays whose variables are summed
            let factors: Vec<Vec<usize>> = self
                .minus
                .basis_labels(a.degree(), k)
                .into_iter()
                .map(|label| {
                    let mut image: Vec<usize> = plus.ray(label).into_iter().collect();
                    if let RayLabel::Element(i) = label {
                        if self.center.contains(i) {
                            image.push(z);
                        }
                    }
                    image
                })
                .collect();
            for choice in expand(&factors) {
                let exps: Vec<(usize, u32)> = choice.into_iter().map(|r| (r, 1)).collect();
                out.add_scaled(&self.plus.reduce(&exps), c);
            }
        }
        out
    }

    /// `Φ_Z` on piecewise linear functions: the value at `e_Z` is `Σ_{i∈Z} ℓ(e_i)`.
    pub fn pullback_pl(&self, ell: &PlFunction) -> PlFunction {
        let mut out = ell.clone();
        let sum = self.center.iter().map(|i| ell.value(RayLabel::Element(i))).sum();
        out.set(RayLabel::Flat(self.center), sum);
        out
    }

    /// `Ψ_Z^{p,q}(a)` for `a ∈ A^{q-p}(M_Z)`: `x_ℱ ↦ x_Z^p x_{ℱ ∪ Z}`.
    pub fn gysin_psi(&self, p: u32, a: &ChowElement) -> ChowElement {
        let plus = self.plus.fan();
        let z = self.center_ray();
        let mut out = ChowElement::zero(a.degree() + p as usize);
        for (k, c) in a.terms() {
            let mut exps = vec![(z, p)];
            for label in self.contracted.basis_labels(a.degree(), k) {
                let RayLabel::Flat(g) = label else {
                    unreachable!("Chow rings of matroids have flat rays only")
                };
                let lifted = self.contraction.lift(g).union(self.center);
                exps.push((plus.flat_ray(lifted).expect("flats above Z are in P₊"), 1));
            }
            out.add_scaled(&self.plus.reduce(&exps), c);
        }
        out
    }

    /// Images of the basis of `A^{q-p}(M_Z)` under `Ψ^{p,q}`.
    fn gysin_images(&self, p: usize, q: usize) -> Vec<ChowElement> {
        if p > q {
            return Vec::new();
        }
        let src = q - p;
        (0..self.contracted.dim(src))
            .map(|k| self.gysin_psi(p as u32, &ChowElement::basis(src, k)))
            .collect()
    }

    fn phi_images(&self, q: usize) -> Vec<ChowElement> {
        (0..self.minus.dim(q)).map(|k| self.pullback_phi(&ChowElement::basis(q, k))).collect()
    }

    /// Rank and dimension count of `Φ^q ⊕ ⨁_{p=1}^{rk Z - 1} Ψ^{p,q}`.
    pub fn verify_decomposition(&self, q: usize) -> DegreeDecomposition {
        let mut images = self.phi_images(q);
        let gysin: Vec<usize> = (1..self.center_rank())
            .map(|p| {
                let g = self.gysin_images(p, q);
                let n = g.len();
                images.extend(g);
                n
            })
            .collect();
        let dim_plus = self.plus.dim(q);
        let rows: Vec<Vec<Q>> = images.iter().map(|a| a.to_dense(dim_plus)).collect();
        let rank = rank(&rows, dim_plus);
        let dim_minus = self.minus.dim(q);
        let total = dim_minus + gysin.iter().sum::<usize>();
        DegreeDecomposition { q, dim_minus, gysin, dim_plus, rank, holds: rank == total && total == dim_plus }
    }

    /// All degrees `0..=r`, in parallel.
    pub fn decomposition_report(&self) -> Vec<DegreeDecomposition> {
        (0..=self.minus.top()).into_par_iter().map(|q| self.verify_decomposition(q)).collect()
    }

    /// Error unless the decomposition holds in every degree.
    pub fn check_decomposition(&self) -> Result<()> {
        match self.decomposition_report().into_iter().find(|d| !d.holds) {
            None => Ok(()),
            Some(d) => Err(Error::DecompositionViolation(format!(
                "center {} in degree {}: rank {} of {} columns, dim A^q(P+) = {}",
                self.center,
                d.q,
                d.rank,
                d.dim_minus + d.gysin.iter().sum::<usize>(),
                d.dim_plus
            ))),
        }
    }

    /// `x_i x_Z + x_Z² + Ψ^{1,2}(β_{M_Z}) = 0` in `A*(M,P₊)` for `i ∈ Z`.
    pub fn minimal_flat_relation(&self, i: usize) -> bool {
        debug_assert!(self.center.contains(i));
        let z = self.center_ray();
        let mut sum = self.plus.reduce(&[(z, 2)]);
        if let Some(x) = self.plus.fan().element_ray(i) {
            sum = sum.add(&self.plus.reduce(&[(x, 1), (z, 1)]));
        }
        let beta = if self.contracted.top() >= 1 { self.contracted.beta(0) } else { ChowElement::zero(1) };
        sum.add(&self.gysin_psi(1, &beta)).is_zero()
    }

    /// `im Ψ^{p,q₁} · im Φ^{q₂} ⊆ im Ψ^{p,q₁+q₂}`, by residual rank.
    pub fn upper_triangular(&self, p: usize, q1: usize, q2: usize) -> bool {
        let q = q1 + q2;
        if q > self.plus.top() {
            return true;
        }
        let dim = self.plus.dim(q);
        let target: Vec<Vec<Q>> = self.gysin_images(p, q).iter().map(|a| a.to_dense(dim)).collect();
        let base = rank(&target, dim);
        let mut rows = target;
        for a in self.gysin_images(p, q1) {
            for b in self.phi_images(q2) {
                rows.push(self.plus.multiply(&a, &b).to_dense(dim));
            }
        }
        rank(&rows, dim) == base
    }

    /// Signed degree `deg(x_Z^{rk Z} x_{𝒵₂})` for a complete flag `𝒵₂` above `Z`;
    /// the flag is the lexicographically first one.
    pub fn gysin_top_degree(&self) -> Result<Q> {
        let m = self.matroid();
        let mut flag = Vec::new();
        let mut cur = self.center;
        loop {
            let next = m.lattice().covers(cur).iter().copied().find(|&g| g != m.ground());
            match next {
                Some(g) => {
                    flag.push(g);
                    cur = g;
                }
                None => break,
            }
        }
        let plus = self.plus.fan();
        let mut exps = vec![(self.center_ray(), self.center_rank() as u32)];
        exps.extend(flag.iter().map(|&g| (plus.flat_ray(g).expect("flats above Z are in P₊"), 1)));
        self.plus.degree(&self.plus.reduce(&exps))
    }

    /// `Γ_Z^{p,q}(a)` in a ring over `P(M)` for `a ∈ A^{q-p}(M^Z)`: `x_ℱ ↦ x_Z^p x_ℱ`.
    pub fn gysin_gamma(&self, full: &ChowRing, p: u32, a: &ChowElement) -> ChowElement {
        gamma(full, self.center, &self.restriction, &self.restricted, p, a)
    }

    /// Ample class on `Σ_{M,P₊}` from one on `Σ_{M,P₋}`; see [`transport_ample`].
    pub fn ample_after_flip(&self, ell: &PlFunction) -> Result<AmpleTransport> {
        let m = self.matroid();
        let minus = build_fan(m, self.minus.fan().filter(), false)?;
        let plus = build_fan(m, self.plus.fan().filter(), false)?;
        transport_ample(&minus, &plus, self.center, ell)
    }
}

/// `Γ_Z^{p,q}`: flats of `M^Z` are flats of `M` inside `Z`.
pub fn gamma(
    full: &ChowRing,
    z: Subset,
    restriction: &Minor,
    restricted: &ChowRing,
    p: u32,
    a: &ChowElement,
) -> ChowElement {
    let fan = full.fan();
    let zr = fan.flat_ray(z).expect("Z is a ray of Σ_M");
    let mut out = ChowElement::zero(a.degree() + p as usize);
    for (k, c) in a.terms() {
        let mut exps = vec![(zr, p)];
        for label in restricted.basis_labels(a.degree(), k) {
            let RayLabel::Flat(g) = label else {
                unreachable!("Chow rings of matroids have flat rays only")
            };
            exps.push((fan.flat_ray(restriction.lift(g)).expect("flats of M^Z are flats of M"), 1));
        }
        out.add_scaled(&full.reduce(&exps), c);
    }
    out
}

/// `x_Z x_Z̃ (x_Z + α_{M^Z}) = 0` in `A*(M)` when `Z̃` covers `Z`, and
/// `x_Z (x_Z + α_{M^Z}) = 0` when `Z` is a hyperplane (pass `None`).
pub fn alpha_relation(full: &ChowRing, z: Subset, cover: Option<Subset>) -> Result<bool> {
    let m = full.matroid();
    let restriction = m.restriction(z)?;
    let restricted = ChowRing::of_matroid(&restriction.matroid)?;
    let fan = full.fan();
    let zr = fan.flat_ray(z).ok_or_else(|| Error::RayNotInFan(z.to_string()))?;
    let alpha = if restricted.top() >= 1 { restricted.alpha(0) } else { ChowElement::zero(1) };
    let gamma_alpha = gamma(full, z, &restriction, &restricted, 1, &alpha);
    let inner = full.reduce(&[(zr, 2)]).add(&gamma_alpha);
    let value = match cover {
        Some(c) => {
            let cr = fan.flat_ray(c).ok_or_else(|| Error::RayNotInFan(c.to_string()))?;
            full.multiply(&inner, &full.reduce(&[(cr, 1)]))
        }
        None => inner,
    };
    Ok(value.is_zero())
}

/// Outcome of [`transport_ample`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AmpleTransport {
    /// Exact bound: `ℓ₊(t)` is strictly convex for `0 < t < bound`.
    pub bound: Q,
    pub t: Q,
    pub ell: PlFunction,
}

/// `ℓ₊(t) = Φ_Z(ℓ₋) - t x_Z`.
pub fn flipped_class(center: Subset, ell: &PlFunction, t: &Q) -> PlFunction {
    let mut out = ell.clone();
    let sum: Q = center.iter().map(|i| ell.value(RayLabel::Element(i))).sum();
    out.set(RayLabel::Flat(center), sum - t);
    out
}

/// Transport a strictly convex `ℓ₋` on the non-reduced fan of `P₋` across the
/// flip with center `z`. The bound is the minimum, over the cones of the
/// plus fan, of `Σ_{i∈Z∖I} ℓ₋(e_i)` (cones without `Z`) and of `ℓ₋(e_F)` over
/// the link of `σ_{Z<ℱ∖Z}` (cones with `Z`), with `ℓ₋` normalized to vanish
/// on the relevant cone of the minus fan. The returned class uses half the
/// bound and has been checked to be strictly convex.
pub fn transport_ample(minus: &BergmanFan, plus: &BergmanFan, z: Subset, ell: &PlFunction) -> Result<AmpleTransport> {
    if let Some(c) = first_nonconvex_cone(minus, ell, true) {
        return Err(Error::NotAmple(format!("input fails around {}", minus.describe_cone(c))));
    }
    let values = ell.on(minus);
    let bounds: Vec<Option<Q>> = (0..plus.num_cones())
        .into_par_iter()
        .map(|c| cone_bound(minus, plus, z, &values, c))
        .collect();
    let bound = bounds
        .into_iter()
        .flatten()
        .reduce(|a, b| if b < a { b } else { a })
        .ok_or_else(|| Error::NotAmple("no cone constrains t".into()))?;
    if !bound.is_positive() {
        return Err(Error::NotAmple(format!("bound {bound} is not positive")));
    }
    let t = &bound / Q::from_integer(2.into());
    let out = flipped_class(z, ell, &t);
    if let Some(c) = first_nonconvex_cone(plus, &out, true) {
        return Err(Error::NotAmple(format!("flipped class fails around {}", plus.describe_cone(c))));
    }
    Ok(AmpleTransport { bound, t, ell: out })
}

fn cone_bound(minus: &BergmanFan, plus: &BergmanFan, z: Subset, values: &[Q], cone: ConeId) -> Option<Q> {
    let labels = plus.cone_labels(cone);
    if labels.contains(&RayLabel::Flat(z)) {
        // σ_{Z < ℱ∖Z} in the minus fan
        let mut rays: Vec<usize> = z.iter().filter_map(|i| minus.element_ray(i)).collect();
        for &l in &labels {
            if let RayLabel::Flat(f) = l {
                if f != z {
                    rays.push(minus.flat_ray(f)?);
                }
            }
        }
        let id = minus.cone_id(&rays)?;
        let witness = convexity_around(minus, values, id).witness;
        let norm = normalized(minus, values, &witness);
        minus
            .link(id)
            .iter()
            .filter(|&&(f, _)| matches!(minus.ray_label(f), RayLabel::Flat(_)))
            .map(|&(f, _)| norm[f].clone())
            .reduce(|a, b| if b < a { b } else { a })
    } else {
        let rays: Vec<usize> = labels.iter().map(|&l| minus.ray(l)).collect::<Option<_>>()?;
        let id = minus.cone_id(&rays)?;
        let witness = convexity_around(minus, values, id).witness;
        let norm = normalized(minus, values, &witness);
        let i_set = plus.cone_parts(cone).0;
        let mut sum = Q::zero();
        for i in z.difference(i_set).iter() {
            sum += &norm[minus.element_ray(i)?];
        }
        Some(sum)
    }
}

/// All index choices, one per factor.
fn expand(factors: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::new()];
    for f in factors {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                f.iter().map(move |&r| {
                    let mut next = prefix.clone();
                    next.push(r);
                    next
                })
            })
            .collect();
    }
    out
}

/// Report of one flip in a chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StepReport {
    pub center: String,
    pub center_rank: usize,
    pub filter_minus: String,
    pub degrees: Vec<DegreeDecomposition>,
    pub holds: bool,
}

/// A full chain `∅ ⇝ ... ⇝ P(M)` with degree maps attached to every ring.
#[derive(Debug)]
pub struct FlipChain {
    order: ChainOrder,
    rings: Vec<Arc<ChowRing>>,
    steps: Vec<FlipStep>,
}

impl FlipChain {
    pub fn new(m: &Matroid, order: ChainOrder) -> Result<FlipChain> {
        let filters = chain_filters(m, order);
        // chain fans skip the pairwise fan-property LP; build_fan verifies it
        let rings: Vec<Arc<ChowRing>> = filters
            .par_iter()
            .map(|p| Arc::new(ChowRing::new(BergmanFan::new(m, p, true))))
            .collect();
        let steps: Vec<FlipStep> = rings
            .windows(2)
            .map(|w| FlipStep::new(w[0].clone(), w[1].clone()))
            .collect::<Result<_>>()?;
        let chain = FlipChain { order, rings, steps };
        chain.attach_degrees()?;
        Ok(chain)
    }

    /// `deg` on `A^r(M,P_k)` through `Φ_{P_k^c}`, from the top of the chain down.
    fn attach_degrees(&self) -> Result<()> {
        let last = self.rings.last().expect("chain starts at the empty filter");
        last.set_top_degree(Q::one())?;
        let r = last.top();
        let mut deg = Q::one();
        for step in self.steps.iter().rev() {
            let image = step.pullback_phi(&ChowElement::basis(r, 0));
            deg = image.coeff(0) * deg;
            step.minus.set_top_degree(deg.clone())?;
        }
        Ok(())
    }

    pub fn order(&self) -> ChainOrder {
        self.order
    }

    pub fn rings(&self) -> &[Arc<ChowRing>] {
        &self.rings
    }

    pub fn steps(&self) -> &[FlipStep] {
        &self.steps
    }

    pub fn centers(&self) -> Vec<Subset> {
        self.steps.iter().map(FlipStep::center).collect()
    }

    /// `Φ_{P_N} ∘ ... ∘ Φ_{P_{from+1}}` applied to an element of ring `from`.
    pub fn push_forward(&self, from: usize, a: &ChowElement) -> ChowElement {
        self.steps[from..].iter().fold(a.clone(), |acc, s| s.pullback_phi(&acc))
    }

    pub fn report(&self) -> Vec<StepReport> {
        self.steps
            .iter()
            .map(|s| {
                let degrees = s.decomposition_report();
                let holds = degrees.iter().all(|d| d.holds);
                let m = s.matroid();
                StepReport {
                    center: s.center.to_string(),
                    center_rank: s.center_rank(),
                    filter_minus: s.minus.fan().filter().descriptor(m),
                    degrees,
                    holds,
                }
            })
            .collect()
    }
}

/// The Chow ring of `Σ_{M,P}` with `deg = deg_M ∘ Φ_{P^c}` attached, through a
/// chain that first fills up `P` and then continues in the default order.
pub fn ring_with_degree(m: &Matroid, filter: &OrderFilter) -> Result<Arc<ChowRing>> {
    let mut filters = vec![OrderFilter::empty()];
    loop {
        let last = filters.last().expect("nonempty");
        let inside: Vec<Subset> = last.maximal_missing(m).into_iter().filter(|&f| filter.contains(f)).collect();
        let candidates = if inside.is_empty() { last.maximal_missing(m) } else { inside };
        let Some(z) = ChainOrder::HighRankFirst.pick(m, &candidates) else {
            break;
        };
        let next = last.with(m, z)?;
        filters.push(next);
    }
    let pos = filters
        .iter()
        .position(|p| p == filter)
        .ok_or_else(|| Error::NotAnOrderFilter(format!("{filter} is not reached by a flip chain")))?;
    let rings: Vec<Arc<ChowRing>> = filters[pos..]
        .par_iter()
        .map(|p| Arc::new(ChowRing::new(BergmanFan::new(m, p, true))))
        .collect();
    let last = rings.last().expect("nonempty");
    last.set_top_degree(Q::one())?;
    let r = last.top();
    let mut deg = Q::one();
    for w in rings.windows(2).rev() {
        let step = FlipStep::new(w[0].clone(), w[1].clone())?;
        deg = step.pullback_phi(&ChowElement::basis(r, 0)).coeff(0) * deg;
        w[0].set_top_degree(deg.clone())?;
    }
    Ok(rings[0].clone())
}
