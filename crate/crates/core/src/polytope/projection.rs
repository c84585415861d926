//! Euclidean projection onto box-bounded polytopes.
//!
//! Interval products are handled in closed form. Otherwise the projection
//! onto the box intersected with one or two half-spaces is computed exactly
//! through its dual; if that point lies in the full polytope it is the
//! answer. Dykstra's alternating projections cover the remaining cases.

use super::{feasibility, project_box, BoxPolytope, HalfSpace};
use crate::error::{Error, Result};
use crate::linalg;

const ROW_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProjectionOptions {
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for ProjectionOptions {
    fn default() -> Self {
        ProjectionOptions { tol: 1e-9, max_sweeps: 100_000 }
    }
}

/// `Π_P(p)` within `opts.tol`.
pub fn project_polytope(poly: &BoxPolytope, p: &[f64], opts: &ProjectionOptions) -> Result<Vec<f64>> {
    assert_eq!(p.len(), poly.dim(), "point dimension");
    if let Some((lo, hi)) = poly.interval_bounds()? {
        return clamp_intervals(p, &lo, &hi);
    }
    let rows = poly.active_rows()?;
    let q0 = project_box(p);
    let violated: Vec<usize> = (0..rows.len()).filter(|&j| rows[j].value(&q0) > ROW_TOL).collect();
    if violated.is_empty() {
        return Ok(q0);
    }
    if feasibility(poly).is_none() {
        return Err(Error::Infeasible);
    }
    let feasible = |q: &[f64]| rows.iter().all(|r| r.value(q) <= ROW_TOL);

    for &j in &violated {
        if let Some(q) = project_one(p, &rows[j]) {
            if feasible(&q) {
                return Ok(q);
            }
        }
    }
    for &j in &violated {
        for k in 0..rows.len() {
            if k == j {
                continue;
            }
            if let Some(q) = project_two(p, &rows[j], &rows[k]) {
                if feasible(&q) {
                    return Ok(q);
                }
            }
        }
    }
    let q = dykstra(p, &rows, opts)?;
    // Polish with the exact solver when at most two rows end up active.
    let active: Vec<&HalfSpace> = rows.iter().filter(|r| r.value(&q).abs() <= 1e-7).collect();
    let polished = match active.as_slice() {
        [r] => project_one(p, r),
        [r, s] => project_two(p, r, s),
        _ => None,
    };
    Ok(polished.filter(|x| feasible(x)).unwrap_or(q))
}

fn clamp_intervals(p: &[f64], lo: &[f64], hi: &[f64]) -> Result<Vec<f64>> {
    p.iter()
        .zip(lo.iter().zip(hi))
        .map(|(v, (&l, &h))| {
            if l > h + ROW_TOL {
                Err(Error::Infeasible)
            } else if l > h {
                Ok(0.5 * (l + h))
            } else {
                Ok(v.clamp(l, h))
            }
        })
        .collect()
}

fn clamp_shift(p: &[f64], a: &[f64], lambda: f64) -> Vec<f64> {
    p.iter().zip(a).map(|(pi, ai)| (pi - lambda * ai).clamp(0.0, 1.0)).collect()
}

/// Smallest `λ ≥ 0` with `aᵀ clamp(p − λa) ≤ β`; `None` if no such `λ`.
fn multiplier(p: &[f64], a: &[f64], beta: f64) -> Option<f64> {
    let phi = |l: f64| linalg::dot(a, &clamp_shift(p, a, l));
    let mut prev_l = 0.0;
    let mut prev_v = phi(0.0);
    if prev_v <= beta {
        return Some(0.0);
    }
    let mut breaks: Vec<f64> = Vec::with_capacity(2 * p.len());
    for (pi, ai) in p.iter().zip(a) {
        if *ai != 0.0 {
            for t in [pi / ai, (pi - 1.0) / ai] {
                if t > 0.0 {
                    breaks.push(t);
                }
            }
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    for l in breaks {
        let v = phi(l);
        if v <= beta {
            let frac = if prev_v > v { (prev_v - beta) / (prev_v - v) } else { 1.0 };
            return Some(prev_l + frac * (l - prev_l));
        }
        prev_l = l;
        prev_v = v;
    }
    None
}

/// Exact projection onto `[0,1]^d ∩ {aᵀq ≤ β}`.
fn project_one(p: &[f64], r: &HalfSpace) -> Option<Vec<f64>> {
    multiplier(p, &r.a, r.beta).map(|l| clamp_shift(p, &r.a, l))
}

/// Exact projection onto `[0,1]^d ∩ H_r ∩ H_s` by bisection on the second
/// multiplier; the dual derivative in it is non-increasing.
fn project_two(p: &[f64], r: &HalfSpace, s: &HalfSpace) -> Option<Vec<f64>> {
    let inner = |ls: f64| -> Option<Vec<f64>> {
        let shifted: Vec<f64> = p.iter().zip(&s.a).map(|(pi, si)| pi - ls * si).collect();
        project_one(&shifted, r)
    };
    let psi = |q: &[f64]| s.value(q);
    let q0 = inner(0.0)?;
    if psi(&q0) <= 0.0 {
        return Some(q0);
    }
    let mut lo = 0.0;
    let mut hi = 1.0;
    loop {
        match inner(hi) {
            Some(q) if psi(&q) <= 0.0 => break,
            _ if hi > 1e12 => return None,
            _ => {
                lo = hi;
                hi *= 2.0;
            }
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        match inner(mid) {
            Some(q) if psi(&q) > 0.0 => lo = mid,
            Some(_) => hi = mid,
            None => lo = mid,
        }
    }
    inner(hi)
}

fn dykstra(p: &[f64], rows: &[HalfSpace], opts: &ProjectionOptions) -> Result<Vec<f64>> {
    let n = p.len();
    let m = rows.len();
    let norms: Vec<f64> = rows.iter().map(|r| linalg::dot(&r.a, &r.a)).collect();
    let mut x = p.to_vec();
    let mut inc = vec![vec![0.0; n]; m + 1];
    let mut change = f64::INFINITY;
    for _ in 0..opts.max_sweeps {
        let start = x.clone();
        for (j, r) in rows.iter().enumerate() {
            let y = linalg::add(&x, &inc[j]);
            let excess = r.value(&y);
            let proj = if excess > 0.0 { linalg::axpy(&y, -excess / norms[j], &r.a) } else { y.clone() };
            inc[j] = linalg::sub(&y, &proj);
            x = proj;
        }
        let y = linalg::add(&x, &inc[m]);
        let proj = project_box(&y);
        inc[m] = linalg::sub(&y, &proj);
        x = proj;
        change = linalg::dist(&x, &start);
        let violation = rows.iter().map(|r| r.value(&x)).fold(0.0, f64::max);
        if change <= 0.1 * opts.tol && violation <= opts.tol {
            return Ok(x);
        }
    }
    Err(Error::NoConvergence { iterations: opts.max_sweeps, residual: change })
}
