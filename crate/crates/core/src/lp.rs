//! Exact two-phase simplex over the rationals.
//!
//! Problems are `maximize c·x subject to A x ≤ b` with free variables. Bland's
//! rule makes the method terminate; sizes here are a few dozen rows at most.

use num_traits::{One, Signed, Zero};

use crate::linalg::Q;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Q, point: Vec<Q> },
}

impl LpOutcome {
    pub fn is_feasible(&self) -> bool {
        !matches!(self, LpOutcome::Infeasible)
    }
}

struct Tableau {
    rows: Vec<Vec<Q>>,
    basis: Vec<usize>,
    width: usize,
}

impl Tableau {
    fn pivot(&mut self, obj: &mut [Q], r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for x in self.rows[r].iter_mut() {
            if !x.is_zero() {
                *x *= &inv;
            }
        }
        let pivot_row = self.rows[r].clone();
        let eliminate = |row: &mut [Q]| {
            if row[c].is_zero() {
                return;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x -= &f * y;
                }
            }
        };
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i != r {
                eliminate(row);
            }
        }
        eliminate(obj);
        self.basis[r] = c;
    }

    /// Run simplex iterations on reduced-cost row `obj` (maximization).
    /// Returns false if unbounded.
    fn optimize(&mut self, obj: &mut [Q], allowed: &[bool]) -> bool {
        let rhs = self.width;
        loop {
            let entering = (0..self.width).find(|&j| allowed[j] && obj[j].is_positive());
            let Some(c) = entering else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[c].is_positive() {
                    continue;
                }
                let ratio = &row[rhs] / &row[c];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            let Some((r, _)) = best else {
                return false;
            };
            self.pivot(obj, r, c);
        }
    }
}

/// Maximize `objective · x` subject to `a_i · x ≤ b_i` for each `(a_i, b_i)`.
pub fn maximize(objective: &[Q], constraints: &[(Vec<Q>, Q)]) -> LpOutcome {
    let n = objective.len();
    let m = constraints.len();
    let needs_art: Vec<bool> = constraints.iter().map(|(_, b)| b.is_negative()).collect();
    let n_art = needs_art.iter().filter(|&&x| x).count();
    // columns: x+ (n), x- (n), slack (m), artificial (n_art), rhs
    let width = 2 * n + m + n_art;
    let mut rows = Vec::with_capacity(m);
    let mut basis = Vec::with_capacity(m);
    let mut art = 2 * n + m;
    for (i, (a, b)) in constraints.iter().enumerate() {
        debug_assert_eq!(a.len(), n);
        let mut row = vec![Q::zero(); width + 1];
        let sign = if needs_art[i] { -Q::one() } else { Q::one() };
        for k in 0..n {
            row[k] = &a[k] * &sign;
            row[n + k] = -&row[k];
        }
        row[2 * n + i] = sign.clone();
        row[width] = b * &sign;
        if needs_art[i] {
            row[art] = Q::one();
            basis.push(art);
            art += 1;
        } else {
            basis.push(2 * n + i);
        }
        rows.push(row);
    }
    let mut t = Tableau { rows, basis, width };
    let is_art = |j: usize| j >= 2 * n + m && j < width;

    if n_art > 0 {
        let mut obj = vec![Q::zero(); width + 1];
        for j in 2 * n + m..width {
            obj[j] = -Q::one();
        }
        for i in 0..m {
            if is_art(t.basis[i]) {
                for (o, x) in obj.iter_mut().zip(&t.rows[i]) {
                    *o += x;
                }
            }
        }
        let allowed = vec![true; width];
        t.optimize(&mut obj, &allowed);
        // obj[width] = -(current objective) = sum of artificials
        if !obj[width].is_zero() {
            return LpOutcome::Infeasible;
        }
        // drive remaining (zero-valued) artificials out of the basis
        let mut i = 0;
        while i < t.rows.len() {
            if is_art(t.basis[i]) {
                match (0..2 * n + m).find(|&j| !t.rows[i][j].is_zero()) {
                    Some(j) => t.pivot(&mut obj, i, j),
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                        continue;
                    }
                }
            }
            i += 1;
        }
    }

    let mut obj = vec![Q::zero(); width + 1];
    for k in 0..n {
        obj[k] = objective[k].clone();
        obj[n + k] = -objective[k].clone();
    }
    for i in 0..t.rows.len() {
        let cb = obj[t.basis[i]].clone();
        if !cb.is_zero() {
            for (o, x) in obj.iter_mut().zip(&t.rows[i]) {
                if !x.is_zero() {
                    *o -= &cb * x;
                }
            }
        }
    }
    let allowed: Vec<bool> = (0..width).map(|j| !is_art(j)).collect();
    if !t.optimize(&mut obj, &allowed) {
        return LpOutcome::Unbounded;
    }
    let mut point = vec![Q::zero(); n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            point[b] += &t.rows[i][width];
        } else if b < 2 * n {
            point[b - n] -= &t.rows[i][width];
        }
    }
    let value = -obj[width].clone();
    LpOutcome::Optimal { value, point }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{dot, q, q_frac};

    fn c(a: &[i64], b: i64) -> (Vec<Q>, Q) {
        (a.iter().map(|&x| q(x)).collect(), q(b))
    }

    #[test]
    fn small_optimum() {
        // max x + y, x + 2y <= 4, 3x + y <= 6, x,y >= 0
        let cons = [c(&[1, 2], 4), c(&[3, 1], 6), c(&[-1, 0], 0), c(&[0, -1], 0)];
        match maximize(&[q(1), q(1)], &cons) {
            LpOutcome::Optimal { value, point } => {
                assert_eq!(value, q_frac(14, 5));
                assert_eq!(point, vec![q_frac(8, 5), q_frac(6, 5)]);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn negative_rhs_and_infeasible() {
        // x >= 2 and x <= 1
        let cons = [c(&[-1], -2), c(&[1], 1)];
        assert_eq!(maximize(&[q(0)], &cons), LpOutcome::Infeasible);
        // x >= 2, maximize -x: optimum at 2
        let cons = [c(&[-1], -2)];
        match maximize(&[q(-1)], &cons) {
            LpOutcome::Optimal { point, .. } => assert_eq!(point, vec![q(2)]),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unbounded_and_free_variables() {
        let cons = [c(&[1, -1], 0)];
        assert_eq!(maximize(&[q(1), q(0)], &cons), LpOutcome::Unbounded);
        // a free variable that must go negative
        let cons = [c(&[1, 1], -3), c(&[-1, 0], 0)];
        match maximize(&[q(0), q(1)], &cons) {
            LpOutcome::Optimal { point, value } => {
                assert_eq!(value, q(-3));
                assert!(dot(&[q(1), q(1)], &point) <= q(-3));
            }
            other => panic!("{other:?}"),
        }
    }
}
