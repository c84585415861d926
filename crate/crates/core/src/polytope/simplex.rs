//! Dense two-phase simplex with Bland's rule for
//! `min cᵀz  s.t.  a_jᵀz ≤ β_j, 0 ≤ z ≤ 1`.

use crate::error::{Error, Result};

const PIVOT_TOL: f64 = 1e-11;
const COST_TOL: f64 = 1e-10;
const PHASE_ONE_TOL: f64 = 1e-9;
const MAX_PIVOTS: usize = 200_000;

struct Tableau {
    /// Constraint rows; the last entry of each row is the right-hand side.
    rows: Vec<Vec<f64>>,
    basis: Vec<usize>,
    ncols: usize,
}

impl Tableau {
    fn rhs(&self, i: usize) -> f64 {
        self.rows[i][self.ncols]
    }

    fn pivot(&mut self, r: usize, col: usize, obj: &mut [f64]) {
        let p = self.rows[r][col];
        for v in self.rows[r].iter_mut() {
            *v /= p;
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r {
                continue;
            }
            let f = row[col];
            if f != 0.0 {
                for (v, pv) in row.iter_mut().zip(&pivot_row) {
                    *v -= f * pv;
                }
                row[col] = 0.0;
            }
        }
        let f = obj[col];
        if f != 0.0 {
            for (v, pv) in obj.iter_mut().zip(&pivot_row) {
                *v -= f * pv;
            }
            obj[col] = 0.0;
        }
        self.basis[r] = col;
    }

    /// Reduced-cost row for `cost` under the current basis; the last entry
    /// holds minus the objective value.
    fn reduced_costs(&self, cost: &[f64]) -> Vec<f64> {
        let mut obj = vec![0.0; self.ncols + 1];
        obj[..cost.len()].copy_from_slice(cost);
        for (i, &b) in self.basis.iter().enumerate() {
            let cb = obj[b];
            if cb != 0.0 {
                for (v, t) in obj.iter_mut().zip(&self.rows[i]) {
                    *v -= cb * t;
                }
            }
        }
        obj
    }

    /// Minimises `cost` over columns accepted by `allowed` using Bland's rule.
    fn optimise(&mut self, cost: &[f64], allowed: &dyn Fn(usize) -> bool) -> Result<Vec<f64>> {
        let mut obj = self.reduced_costs(cost);
        for _ in 0..MAX_PIVOTS {
            let entering = (0..self.ncols).find(|&j| allowed(j) && obj[j] < -COST_TOL);
            let Some(col) = entering else {
                return Ok(obj);
            };
            let mut leave: Option<(usize, f64)> = None;
            for i in 0..self.rows.len() {
                let a = self.rows[i][col];
                if a > PIVOT_TOL {
                    let ratio = self.rhs(i).max(0.0) / a;
                    leave = match leave {
                        None => Some((i, ratio)),
                        Some((k, best)) => {
                            if ratio < best - 1e-12 * best.abs().max(1.0)
                                || (ratio <= best + 1e-12 * best.abs().max(1.0) && self.basis[i] < self.basis[k])
                            {
                                Some((i, ratio))
                            } else {
                                Some((k, best))
                            }
                        }
                    };
                }
            }
            // Box bounds keep every LP here bounded.
            let (r, _) = leave.ok_or_else(|| Error::InvalidInstance("unbounded linear program".into()))?;
            self.pivot(r, col, &mut obj);
        }
        Err(Error::NoConvergence { iterations: MAX_PIVOTS, residual: f64::NAN })
    }
}

/// Returns an optimal vertex and its value, or `Error::Infeasible`.
pub(crate) fn solve(n: usize, rows: &[(Vec<f64>, f64)], cost: &[f64]) -> Result<(Vec<f64>, f64)> {
    let m = rows.len();
    // Columns: z (n) | upper slacks u (n) | row slacks s (m) | artificials.
    let neg: Vec<usize> = (0..m).filter(|&j| rows[j].1 < 0.0).collect();
    let art0 = 2 * n + m;
    let ncols = art0 + neg.len();
    let mut t = Tableau { rows: Vec::with_capacity(n + m), basis: Vec::with_capacity(n + m), ncols };
    for i in 0..n {
        let mut r = vec![0.0; ncols + 1];
        r[i] = 1.0;
        r[n + i] = 1.0;
        r[ncols] = 1.0;
        t.rows.push(r);
        t.basis.push(n + i);
    }
    let mut art = art0;
    for (j, (a, beta)) in rows.iter().enumerate() {
        let mut r = vec![0.0; ncols + 1];
        let sign = if *beta < 0.0 { -1.0 } else { 1.0 };
        for (k, v) in a.iter().enumerate() {
            r[k] = sign * v;
        }
        r[2 * n + j] = sign;
        r[ncols] = sign * beta;
        if *beta < 0.0 {
            r[art] = 1.0;
            t.basis.push(art);
            art += 1;
        } else {
            t.basis.push(2 * n + j);
        }
        t.rows.push(r);
    }

    if !neg.is_empty() {
        let mut phase_one = vec![0.0; ncols];
        for v in phase_one.iter_mut().skip(art0) {
            *v = 1.0;
        }
        let obj = t.optimise(&phase_one, &|_| true)?;
        if -obj[ncols] > PHASE_ONE_TOL {
            return Err(Error::Infeasible);
        }
        // Drive remaining artificials out of the basis.
        let mut i = 0;
        while i < t.rows.len() {
            if t.basis[i] >= art0 {
                let col = (0..art0).find(|&j| t.rows[i][j].abs() > PIVOT_TOL);
                match col {
                    Some(col) => {
                        let mut dummy = vec![0.0; ncols + 1];
                        t.pivot(i, col, &mut dummy);
                        i += 1;
                    }
                    None => {
                        t.rows.remove(i);
                        t.basis.remove(i);
                    }
                }
            } else {
                i += 1;
            }
        }
    }

    let mut full_cost = vec![0.0; ncols];
    full_cost[..n].copy_from_slice(cost);
    t.optimise(&full_cost, &|j| j < art0)?;

    let mut z = vec![0.0; n];
    for (i, &b) in t.basis.iter().enumerate() {
        if b < n {
            z[b] = t.rhs(i).clamp(0.0, 1.0);
        }
    }
    let value = z.iter().zip(cost).map(|(a, b)| a * b).sum();
    Ok((z, value))
}
