//! Exact two-phase simplex over rationals for `max c·x  s.t.  A x = b, x ≥ 0`.
//! Bland's rule throughout, so runs are deterministic and never cycle.

use num_traits::{One, Signed, Zero};

use crate::rational::Rational;

#[derive(Clone, PartialEq, Debug)]
pub enum LpOutcome {
    Infeasible,
    Unbounded,
    Optimal { value: Rational, solution: Vec<Rational> },
}

struct Tableau {
    rows: Vec<Vec<Rational>>,
    rhs: Vec<Rational>,
    basis: Vec<usize>,
    /// Reduced costs `c_B B⁻¹ A_j - c_j`; entering columns have negative entries.
    z: Vec<Rational>,
    z_rhs: Rational,
}

impl Tableau {
    fn pivot(&mut self, r: usize, col: usize) {
        let p = self.rows[r][col].clone();
        if !p.is_one() {
            for v in self.rows[r].iter_mut() {
                *v /= &p;
            }
            self.rhs[r] /= &p;
        }
        let prow = self.rows[r].clone();
        let prhs = self.rhs[r].clone();
        for i in 0..self.rows.len() {
            if i == r || self.rows[i][col].is_zero() {
                continue;
            }
            let f = self.rows[i][col].clone();
            for (v, pv) in self.rows[i].iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.rhs[i] -= &f * &prhs;
        }
        if !self.z[col].is_zero() {
            let f = self.z[col].clone();
            for (v, pv) in self.z.iter_mut().zip(&prow) {
                if !pv.is_zero() {
                    *v -= &f * pv;
                }
            }
            self.z_rhs -= &f * &prhs;
        }
        self.basis[r] = col;
    }

    /// Returns false when the objective is unbounded.
    fn optimize(&mut self, ncols: usize) -> bool {
        loop {
            let Some(col) = (0..ncols).find(|&j| self.z[j].is_negative()) else {
                return true;
            };
            let mut best: Option<(usize, Rational)> = None;
            for i in 0..self.rows.len() {
                let a = &self.rows[i][col];
                if !a.is_positive() {
                    continue;
                }
                let ratio = &self.rhs[i] / a;
                let better = match &best {
                    None => true,
                    Some((bi, br)) => ratio < *br || (ratio == *br && self.basis[i] < self.basis[*bi]),
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, col),
                None => return false,
            }
        }
    }
}

pub fn maximize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let m = a.len();
    let n = c.len();
    debug_assert!(a.iter().all(|r| r.len() == n));
    debug_assert_eq!(b.len(), m);

    let mut rows = Vec::with_capacity(m);
    let mut rhs = Vec::with_capacity(m);
    for (i, (row, bi)) in a.iter().zip(b).enumerate() {
        let neg = bi.is_negative();
        let mut r: Vec<Rational> = row.iter().map(|v| if neg { -v } else { v.clone() }).collect();
        r.extend((0..m).map(|k| if k == i { Rational::one() } else { Rational::zero() }));
        rows.push(r);
        rhs.push(if neg { -bi } else { bi.clone() });
    }

    // Phase 1: maximize minus the sum of artificials.
    let mut z = vec![Rational::zero(); n + m];
    for row in &rows {
        for j in 0..n {
            z[j] -= &row[j];
        }
    }
    let z_rhs = -rhs.iter().fold(Rational::zero(), |acc, v| acc + v);
    let mut t = Tableau { rows, rhs, basis: (n..n + m).collect(), z, z_rhs };
    t.optimize(n + m);
    if t.z_rhs.is_negative() {
        return LpOutcome::Infeasible;
    }

    // Drive zero-level artificials out of the basis; drop redundant rows.
    let mut r = 0;
    while r < t.rows.len() {
        if t.basis[r] >= n {
            match (0..n).find(|&j| !t.rows[r][j].is_zero()) {
                Some(j) => t.pivot(r, j),
                None => {
                    t.rows.remove(r);
                    t.rhs.remove(r);
                    t.basis.remove(r);
                    continue;
                }
            }
        }
        r += 1;
    }
    for row in t.rows.iter_mut() {
        row.truncate(n);
    }

    // Phase 2.
    t.z = c.iter().map(|v| -v).collect();
    t.z_rhs = Rational::zero();
    for i in 0..t.rows.len() {
        let cb = &c[t.basis[i]];
        if cb.is_zero() {
            continue;
        }
        for j in 0..n {
            t.z[j] += cb * &t.rows[i][j];
        }
        t.z_rhs += cb * &t.rhs[i];
    }
    if !t.optimize(n) {
        return LpOutcome::Unbounded;
    }
    let mut x = vec![Rational::zero(); n];
    for (i, &bv) in t.basis.iter().enumerate() {
        x[bv] = t.rhs[i].clone();
    }
    LpOutcome::Optimal { value: t.z_rhs, solution: x }
}

pub fn minimize(a: &[Vec<Rational>], b: &[Rational], c: &[Rational]) -> LpOutcome {
    let neg: Vec<Rational> = c.iter().map(|v| -v).collect();
    match maximize(a, b, &neg) {
        LpOutcome::Optimal { value, solution } => LpOutcome::Optimal { value: -value, solution },
        other => other,
    }
}

/// Some `x ≥ 0` with `A x = b`, or `None`.
pub fn feasible_point(a: &[Vec<Rational>], b: &[Rational]) -> Option<Vec<Rational>> {
    let n = a.first().map_or(0, Vec::len);
    match maximize(a, b, &vec![Rational::zero(); n]) {
        LpOutcome::Optimal { solution, .. } => Some(solution),
        _ => None,
    }
}
