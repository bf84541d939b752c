//! Small dense exact linear programs in standard form.
//!
//! maximize c·z subject to A z = b, z ≥ 0, solved by the two-phase
//! tableau simplex with Bland's rule over exact rationals. Instances here
//! have at most a few dozen columns, so no attempt is made at sparsity.

use crate::rational::{Q, QVec};
use num_traits::{Signed, Zero};

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Q, solution: QVec },
}

impl LpOutcome {
    pub fn solution(&self) -> Option<&QVec> {
        match self {
            LpOutcome::Optimal { solution, .. } => Some(solution),
            _ => None,
        }
    }
}

struct Tableau {
    rows: Vec<QVec>,
    rhs: QVec,
    basis: Vec<usize>,
}

impl Tableau {
    fn pivot(&mut self, r: usize, c: usize) {
        let inv = self.rows[r][c].recip();
        for v in self.rows[r].iter_mut() {
            *v = &*v * &inv;
        }
        self.rhs[r] = &self.rhs[r] * &inv;
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][c].is_zero() {
                continue;
            }
            let f = self.rows[i][c].clone();
            for j in 0..self.rows[i].len() {
                let sub = &f * &self.rows[r][j];
                self.rows[i][j] -= sub;
            }
            let sub = &f * &self.rhs[r];
            self.rhs[i] -= sub;
        }
        self.basis[r] = c;
    }

    /// Runs simplex iterations for `cost` restricted to columns `< ncols`.
    /// Returns false on unboundedness.
    fn optimize(&mut self, cost: &[Q], ncols: usize) -> bool {
        loop {
            let entering = (0..ncols).find(|&j| {
                if self.basis.contains(&j) {
                    return false;
                }
                let mut r = cost[j].clone();
                for (i, &b) in self.basis.iter().enumerate() {
                    r -= &cost[b] * &self.rows[i][j];
                }
                r.is_positive()
            });
            let Some(j) = entering else {
                return true;
            };
            let mut best: Option<(usize, Q)> = None;
            for i in 0..self.rows.len() {
                if !self.rows[i][j].is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / &self.rows[i][j];
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((i, _)) => self.pivot(i, j),
                None => return false,
            }
        }
    }

    fn objective(&self, cost: &[Q]) -> Q {
        self.basis
            .iter()
            .zip(&self.rhs)
            .fold(Q::zero(), |acc, (&b, v)| acc + &cost[b] * v)
    }
}

/// maximize c·z subject to A z = b, z ≥ 0.
pub fn maximize(a: &[QVec], b: &[Q], c: &[Q]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    debug_assert_eq!(b.len(), m);
    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, row) in a.iter().enumerate() {
        debug_assert_eq!(row.len(), n);
        let flip = b[i].is_negative();
        let mut r: QVec = row.iter().map(|v| if flip { -v } else { v.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { Q::from_integer(1.into()) } else { Q::zero() }));
        rows.push(r);
        rhs.push(if flip { -b[i].clone() } else { b[i].clone() });
    }
    let mut t = Tableau { rows, rhs, basis: (n..n + m).collect() };

    let mut phase1 = vec![Q::zero(); n + m];
    for v in phase1.iter_mut().skip(n) {
        *v = -Q::from_integer(1.into());
    }
    t.optimize(&phase1, n + m);
    if t.objective(&phase1).is_negative() {
        return LpOutcome::Infeasible;
    }

    // Drive zero-level artificials out of the basis; drop redundant rows.
    let mut i = 0;
    while i < t.rows.len() {
        if t.basis[i] >= n {
            if let Some(j) = (0..n).find(|&j| !t.rows[i][j].is_zero()) {
                t.pivot(i, j);
            } else {
                t.rows.remove(i);
                t.rhs.remove(i);
                t.basis.remove(i);
                continue;
            }
        }
        i += 1;
    }

    let mut cost = c.to_vec();
    cost.extend((0..m).map(|_| Q::zero()));
    if !t.optimize(&cost, n) {
        return LpOutcome::Unbounded;
    }
    let mut solution = vec![Q::zero(); n];
    for (i, &bcol) in t.basis.iter().enumerate() {
        if bcol < n {
            solution[bcol] = t.rhs[i].clone();
        }
    }
    LpOutcome::Optimal { value: t.objective(&cost), solution }
}

/// A nonnegative solution of A z = b, if one exists.
pub fn feasible_point(a: &[QVec], b: &[Q]) -> Option<QVec> {
    let n = a.first().map_or(0, |r| r.len());
    match maximize(a, b, &vec![Q::zero(); n]) {
        LpOutcome::Optimal { solution, .. } => Some(solution),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q, qr};

    #[test]
    fn textbook_maximum() {
        // max 3x + 2y, x + y + s1 = 4, x + 3y + s2 = 6
        let a = vec![vec![q(1), q(1), q(1), q(0)], vec![q(1), q(3), q(0), q(1)]];
        let b = vec![q(4), q(6)];
        let c = vec![q(3), q(2), q(0), q(0)];
        match maximize(&a, &b, &c) {
            LpOutcome::Optimal { value, solution } => {
                assert_eq!(value, q(12));
                assert_eq!(solution[0], q(4));
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn detects_infeasible_and_unbounded() {
        let a = vec![vec![q(1), q(1)]];
        assert_eq!(maximize(&a, &[q(-1)], &[q(0), q(0)]), LpOutcome::Infeasible);
        let a = vec![vec![q(1), q(-1)]];
        assert_eq!(maximize(&a, &[q(0)], &[q(1), q(0)]), LpOutcome::Unbounded);
    }

    #[test]
    fn redundant_rows_are_dropped() {
        let a = vec![vec![q(1), q(1)], vec![q(2), q(2)]];
        let b = vec![qr(1, 2), q(1)];
        let sol = feasible_point(&a, &b).unwrap();
        assert_eq!(&sol[0] + &sol[1], qr(1, 2));
    }
}
