//! Closed-form identities in `A*(M)` checked as normal-form equalities.

use serde::Serialize;

use super::{ChowElement, ChowRing};
use crate::error::{Error, Result};
use crate::subset::Subset;

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct FundamentalClassReport {
    /// Flags with `rk F_m = m` whose product with `α^{r-k}` equals `α^r`.
    pub initial_flags: usize,
    /// Flags with a rank jump whose product with `α^{r-k}` vanishes.
    pub other_flags: usize,
}

impl ChowRing {
    /// Every flag of nonempty proper flats of length `k`.
    fn proper_flags(&self, k: usize) -> Vec<Vec<Subset>> {
        let flats = self.matroid().lattice().proper_flats();
        let mut out = Vec::new();
        fn grow(flats: &[Subset], k: usize, flag: &mut Vec<Subset>, out: &mut Vec<Vec<Subset>>) {
            if flag.len() == k {
                out.push(flag.clone());
                return;
            }
            for &f in flats {
                if flag.last().is_none_or(|&g| g.is_proper_subset_of(f)) {
                    flag.push(f);
                    grow(flats, k, flag, out);
                    flag.pop();
                }
            }
        }
        grow(&flats, k, &mut Vec::new(), &mut out);
        out
    }

    /// `x_{F_1}⋯x_{F_k} α^{r-k}` is `α^r` for initial flags and zero otherwise,
    /// over all flags of length `1..=min(r, max_len)`.
    pub fn fundamental_class_checks(&self, max_len: usize) -> Result<FundamentalClassReport> {
        let m = self.matroid();
        let r = self.top();
        let alpha = self.alpha(0);
        let alpha_r = self.power(&alpha, r);
        let mut report = FundamentalClassReport::default();
        for k in 1..=r.min(max_len) {
            let tail = self.power(&alpha, r - k);
            for flag in self.proper_flags(k) {
                let product = self.multiply(&self.flag_monomial(&flag), &tail);
                let initial = flag.iter().enumerate().all(|(pos, &f)| m.rank_of(f) == pos + 1);
                let expected = if initial { alpha_r.clone() } else { ChowElement::zero(r) };
                if product != expected {
                    return Err(Error::IdentityViolation(format!(
                        "x_F α^(r-k) for flag {flag:?} is not {}",
                        if initial { "α^r" } else { "zero" }
                    )));
                }
                if initial {
                    report.initial_flags += 1;
                } else {
                    report.other_flags += 1;
                }
            }
        }
        Ok(report)
    }

    /// `β^k` equals the sum of the monomials of all descending `k`-step flags,
    /// `min F_1 > ... > min F_k > 0`.
    pub fn beta_power_identity(&self, k: usize) -> bool {
        let lhs = self.power(&self.beta(0), k);
        let mut rhs = ChowElement::zero(k);
        for flag in self.proper_flags(k) {
            let mins: Vec<usize> = flag.iter().map(|f| f.min_element().expect("nonempty")).collect();
            if mins.windows(2).all(|w| w[0] > w[1]) && mins[k - 1] > 0 {
                rhs = rhs.add(&self.flag_monomial(&flag));
            }
        }
        lhs == rhs
    }
}
