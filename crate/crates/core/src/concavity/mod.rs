//! Log-concavity of `μ^k`, `w_k` and `f_k`, and of chromatic polynomials.

use num_traits::ToPrimitive;
use serde::Serialize;

use crate::chow::ChowRing;
use crate::error::{Error, Result};
use crate::matroid::{EdgeList, Matroid};
use crate::poly::IntPolynomial;

#[cfg(test)]
mod tests;

/// Where a sequence came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Coefficients of `χ_M(λ) / (λ - 1)`.
    ReducedCharPoly,
    /// `|D_k(M)|`, initial descending flags.
    DescendingFlags,
    /// `deg(α^{r-k} β^k)` in `A*(M)`.
    ChowDegrees,
    /// Coefficients of `χ_M`.
    CharPoly,
    /// `μ` convolved with `(1, 1)`.
    Convolution,
    /// Reduced characteristic polynomial of `M × p`.
    FreeDualExtension,
    /// Direct count of independent sets.
    IndependentSets,
    /// `λ^{n_G} χ_{M_G}(λ)`.
    GraphicCharPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceReport {
    pub name: String,
    pub values: Vec<u64>,
    /// Every route listed produced exactly `values`.
    pub routes: Vec<Route>,
    pub log_concave: bool,
    pub unimodal: bool,
    /// Interior indices `k` with `a_{k-1} a_{k+1} > a_k²`.
    pub violations: Vec<usize>,
}

impl SequenceReport {
    pub fn new(name: &str, values: Vec<u64>, routes: Vec<Route>) -> SequenceReport {
        let violations = log_concavity_violations(&values);
        SequenceReport {
            name: name.to_string(),
            log_concave: violations.is_empty(),
            unimodal: is_unimodal(&values),
            values,
            routes,
            violations,
        }
    }

    pub fn holds(&self) -> bool {
        self.log_concave && self.unimodal
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConcavityReport {
    pub subject: String,
    pub sequences: Vec<SequenceReport>,
}

impl ConcavityReport {
    pub fn holds(&self) -> bool {
        self.sequences.iter().all(SequenceReport::holds)
    }

    pub fn sequence(&self, name: &str) -> Option<&SequenceReport> {
        self.sequences.iter().find(|s| s.name == name)
    }
}

/// Interior indices where `a_{k-1} a_{k+1} ≤ a_k²` fails; exact in `u128`.
pub fn log_concavity_violations(a: &[u64]) -> Vec<usize> {
    (1..a.len().saturating_sub(1))
        .filter(|&k| u128::from(a[k - 1]) * u128::from(a[k + 1]) > u128::from(a[k]) * u128::from(a[k]))
        .collect()
}

pub fn is_log_concave(a: &[u64]) -> bool {
    log_concavity_violations(a).is_empty()
}

/// Weakly increasing, then weakly decreasing.
pub fn is_unimodal(a: &[u64]) -> bool {
    let peak = a.iter().enumerate().max_by_key(|&(k, v)| (v, std::cmp::Reverse(k))).map_or(0, |(k, _)| k);
    a[..=peak.min(a.len().saturating_sub(1))].windows(2).all(|w| w[0] <= w[1])
        && a[peak..].windows(2).all(|w| w[0] >= w[1])
}

pub fn convolve(a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// `μ^k = deg(α^{r-k} β^k)`.
pub fn mu_from_chow(m: &Matroid) -> Result<Vec<u64>> {
    let ring = ChowRing::of_matroid(m)?;
    let r = ring.top();
    let (alpha, beta) = if r == 0 { (ring.one(), ring.one()) } else { (ring.alpha(0), ring.beta(0)) };
    (0..=r)
        .map(|k| {
            let x = ring.multiply(&ring.power(&alpha, r - k), &ring.power(&beta, k));
            let d = ring.degree(&x)?;
            if !d.is_integer() {
                return Err(Error::RouteDisagreement(format!("deg(α^{}β^{k}) = {d} is not an integer", r - k)));
            }
            d.to_integer()
                .to_u64()
                .ok_or_else(|| Error::RouteDisagreement(format!("deg(α^{}β^{k}) = {d} is negative", r - k)))
        })
        .collect()
}

/// `μ^k = |D_k(M)|`, with `μ^0 = 1`.
pub fn mu_from_flags(m: &Matroid) -> Vec<u64> {
    let r = m.rank() - 1;
    (0..=r)
        .map(|k| if k == 0 { 1 } else { m.descending_initial_flags(k).len() as u64 })
        .collect()
}

fn agree(what: &str, routes: &[(Route, Vec<u64>)]) -> Result<Vec<u64>> {
    let (first_route, first) = &routes[0];
    for (route, values) in &routes[1..] {
        if values != first {
            return Err(Error::RouteDisagreement(format!(
                "{what}: {first_route:?} gives {first:?}, {route:?} gives {values:?}"
            )));
        }
    }
    Ok(first.clone())
}

/// `μ` by three routes and `w` by two, all required to agree, then the
/// log-concavity and unimodality checks.
pub fn certify_matroid(name: &str, m: &Matroid) -> Result<ConcavityReport> {
    let mu = agree(
        "mu",
        &[
            (Route::ReducedCharPoly, m.mu_sequence()?),
            (Route::DescendingFlags, mu_from_flags(m)),
            (Route::ChowDegrees, mu_from_chow(m)?),
        ],
    )?;
    let w = agree(
        "w",
        &[(Route::CharPoly, m.whitney_numbers()), (Route::Convolution, convolve(&mu, &[1, 1]))],
    )?;
    Ok(ConcavityReport {
        subject: name.to_string(),
        sequences: vec![
            SequenceReport::new("mu", mu, vec![Route::ReducedCharPoly, Route::DescendingFlags, Route::ChowDegrees]),
            SequenceReport::new("w", w, vec![Route::CharPoly, Route::Convolution]),
        ],
    })
}

/// `f_k(M)` as the `μ`-sequence of `M × p`, checked against direct counts.
pub fn certify_independent_sets(name: &str, m: &Matroid) -> Result<ConcavityReport> {
    let extension = m.free_dual_extension()?;
    let f = agree(
        "f",
        &[
            (Route::FreeDualExtension, extension.mu_sequence()?),
            (Route::IndependentSets, m.independent_counts()),
        ],
    )?;
    Ok(ConcavityReport {
        subject: name.to_string(),
        sequences: vec![SequenceReport::new("f", f, vec![Route::FreeDualExtension, Route::IndependentSets])],
    })
}

/// Number of connected components, isolated vertices included.
pub fn components(g: &EdgeList) -> usize {
    let mut parent: Vec<usize> = (0..g.vertices).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut count = g.vertices;
    for &(u, v) in &g.edges {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        if a != b {
            parent[a] = b;
            count -= 1;
        }
    }
    count
}

/// `χ_G(λ) = λ^{n_G} χ_{M_G}(λ)` with the log-concavity check of its
/// coefficients in absolute value.
pub fn chromatic(name: &str, g: &EdgeList) -> Result<(IntPolynomial, ConcavityReport)> {
    if let Some(k) = g.edges.iter().position(|&(u, v)| u == v) {
        return Err(Error::LoopEdge(k));
    }
    let poly = if g.edges.is_empty() {
        IntPolynomial::monomial(g.vertices)
    } else {
        Matroid::graphic(g.vertices, &g.edges)?.char_poly().shift(components(g))
    };
    let mut coeffs = poly.abs_coefficients_descending();
    // drop the zero tail λ^0 .. λ^{n_G - 1}
    while coeffs.len() > 1 && coeffs.last() == Some(&0) {
        coeffs.pop();
    }
    let report = ConcavityReport {
        subject: name.to_string(),
        sequences: vec![SequenceReport::new("chromatic", coeffs, vec![Route::GraphicCharPoly])],
    };
    Ok((poly, report))
}
