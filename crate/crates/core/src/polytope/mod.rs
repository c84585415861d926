//! Box-bounded polytopes `{z ∈ [0,1]^d : a_jᵀz ≤ β_j}`: projection, linear
//! minimisation, feasibility and Hausdorff probes.

mod hausdorff;
mod projection;
mod simplex;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

pub use hausdorff::{hausdorff, one_sided_hausdorff};
pub use projection::{project_polytope, ProjectionOptions};

/// Coefficient vectors with sup-norm below this are treated as zero rows.
pub const ZERO_ROW_TOL: f64 = 1e-14;
/// Slack accepted when a zero row has a slightly negative bound.
pub const FEASIBILITY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HalfSpace {
    pub a: Vec<f64>,
    pub beta: f64,
}

impl HalfSpace {
    pub fn value(&self, z: &[f64]) -> f64 {
        linalg::dot(&self.a, z) - self.beta
    }

    pub fn is_zero(&self) -> bool {
        linalg::norm_inf(&self.a) <= ZERO_ROW_TOL
    }
}

/// `{z ∈ [0,1]^d : a_jᵀz ≤ β_j ∀j}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxPolytope {
    dim: usize,
    rows: Vec<HalfSpace>,
}

impl BoxPolytope {
    pub fn unit_box(dim: usize) -> Self {
        BoxPolytope { dim, rows: Vec::new() }
    }

    pub fn from_rows(dim: usize, rows: Vec<(Vec<f64>, f64)>) -> Self {
        let rows = rows
            .into_iter()
            .map(|(a, beta)| {
                assert_eq!(a.len(), dim, "row dimension");
                HalfSpace { a, beta }
            })
            .collect();
        BoxPolytope { dim, rows }
    }

    /// Axis-aligned box `[lo, hi]` (intersected with the unit box).
    pub fn interval_product(lo: &[f64], hi: &[f64]) -> Self {
        let d = lo.len();
        let mut rows = Vec::with_capacity(2 * d);
        for i in 0..d {
            let mut a = vec![0.0; d];
            a[i] = 1.0;
            rows.push((a.clone(), hi[i]));
            a[i] = -1.0;
            rows.push((a, -lo[i]));
        }
        BoxPolytope::from_rows(d, rows)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rows(&self) -> &[HalfSpace] {
        &self.rows
    }

    pub fn push(&mut self, a: Vec<f64>, beta: f64) {
        assert_eq!(a.len(), self.dim, "row dimension");
        self.rows.push(HalfSpace { a, beta });
    }

    /// `β_j ← β_j + ν`.
    pub fn relaxed(&self, nu: f64) -> Self {
        let rows = self.rows.iter().map(|r| HalfSpace { a: r.a.clone(), beta: r.beta + nu }).collect();
        BoxPolytope { dim: self.dim, rows }
    }

    /// Largest violation of the box or a row (≤ 0 inside).
    pub fn max_violation(&self, z: &[f64]) -> f64 {
        let boxv = z.iter().map(|v| (-v).max(v - 1.0)).fold(f64::NEG_INFINITY, f64::max);
        self.rows.iter().map(|r| r.value(z)).fold(boxv, f64::max)
    }

    pub fn contains(&self, z: &[f64], tol: f64) -> bool {
        self.max_violation(z) <= tol
    }

    /// Rows with a non-zero coefficient vector; a zero row with a negative
    /// bound makes the polytope empty.
    pub fn active_rows(&self) -> Result<Vec<HalfSpace>> {
        let mut out = Vec::with_capacity(self.rows.len());
        for r in &self.rows {
            if r.is_zero() {
                if r.beta < -FEASIBILITY_TOL {
                    return Err(Error::Infeasible);
                }
            } else {
                out.push(r.clone());
            }
        }
        Ok(out)
    }

    /// Bounds `(lo, hi)` when every row involves a single coordinate.
    pub fn interval_bounds(&self) -> Result<Option<(Vec<f64>, Vec<f64>)>> {
        let rows = self.active_rows()?;
        let mut lo = vec![0.0f64; self.dim];
        let mut hi = vec![1.0f64; self.dim];
        for r in &rows {
            let mut nz = r.a.iter().enumerate().filter(|(_, v)| v.abs() > ZERO_ROW_TOL);
            let (i, &ai) = nz.next().expect("non-zero row");
            if nz.next().is_some() {
                return Ok(None);
            }
            let bound = r.beta / ai;
            if ai > 0.0 {
                hi[i] = hi[i].min(bound);
            } else {
                lo[i] = lo[i].max(bound);
            }
        }
        Ok(Some((lo, hi)))
    }

    fn lp_rows(&self) -> Result<Vec<(Vec<f64>, f64)>> {
        Ok(self.active_rows()?.into_iter().map(|r| (r.a, r.beta)).collect())
    }

    /// Some optimal vertex (no tie-breaking).
    pub(crate) fn lp_vertex(&self, cost: &[f64]) -> Result<(Vec<f64>, f64)> {
        simplex::solve(self.dim, &self.lp_rows()?, cost)
    }
}

/// Componentwise clamp to `[0,1]`.
pub fn project_box(p: &[f64]) -> Vec<f64> {
    p.iter().map(|v| v.clamp(0.0, 1.0)).collect()
}

/// Exact vertex optimum of `min costᵀz` over `p`, breaking ties towards the
/// lexicographically smallest optimal vertex.
pub fn lp_min(p: &BoxPolytope, cost: &[f64]) -> Result<(Vec<f64>, f64)> {
    assert_eq!(cost.len(), p.dim, "cost dimension");
    let rows = p.lp_rows()?;
    let (mut z, value) = simplex::solve(p.dim, &rows, cost)?;
    let relax = |v: f64, tol: f64| v + tol * (1.0 + v.abs());
    let mut face = rows;
    let pin = |face: &mut Vec<(Vec<f64>, f64)>, a: Vec<f64>, v: f64| -> Result<bool> {
        // Pin the optimal face exactly when round-off allows, else with slack.
        for tol in [0.0, 1e-11] {
            let mut trial = face.clone();
            trial.push((a.clone(), relax(v, tol)));
            match simplex::solve(p.dim, &trial, &vec![0.0; p.dim]) {
                Ok(_) => {
                    *face = trial;
                    return Ok(true);
                }
                Err(Error::Infeasible) => continue,
                Err(e) => return Err(e),
            }
        }
        Ok(false)
    };
    if cost.iter().any(|c| *c != 0.0) {
        pin(&mut face, cost.to_vec(), value)?;
    }
    for i in 0..p.dim {
        let mut e = vec![0.0; p.dim];
        e[i] = 1.0;
        match simplex::solve(p.dim, &face, &e) {
            Ok((zi, vi)) => {
                z = zi;
                if !pin(&mut face, e, vi)? {
                    break;
                }
            }
            // Round-off on a tight face: keep the previous optimal vertex.
            Err(Error::Infeasible) => break,
            Err(e) => return Err(e),
        }
    }
    let value = linalg::dot(cost, &z);
    Ok((z, value))
}

/// A feasible point (the lexicographically smallest vertex) or `None`.
pub fn feasibility(p: &BoxPolytope) -> Option<Vec<f64>> {
    lp_min(p, &vec![0.0; p.dim]).ok().map(|(z, _)| z)
}
