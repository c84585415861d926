use rayon::prelude::*;

use super::MEMBERSHIP_TOL;
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::model::{Certificate, MinMaxInstance, Method, Params, Sense};
use crate::polytope::BoxPolytope;

const MAX_BALL_POINTS: usize = 2_000_000;
const MAX_SEARCH_POINTS: usize = 10_000_000;
const OPAQUE_LINE_SAMPLES: usize = 65;

/// Lattice offsets `h·k`, `k ∈ Z^d`, with `‖h·k‖₂ ≤ δ`.
pub fn ball_offsets(d: usize, delta: f64, h: f64) -> Result<Vec<Vec<f64>>> {
    if !(h > 0.0 && h.is_finite()) {
        return Err(Error::InvalidParameter(format!("grid step must be positive, got {h}")));
    }
    let r = (delta / h + 1e-9).floor() as i64;
    let side = (2 * r + 1) as f64;
    if side.powi(d as i32) > MAX_BALL_POINTS as f64 {
        return Err(Error::BudgetExceeded { required: side.powi(d as i32), budget: MAX_BALL_POINTS as f64 });
    }
    let mut out = Vec::new();
    let mut k = vec![-r; d];
    loop {
        let off: Vec<f64> = k.iter().map(|v| *v as f64 * h).collect();
        if linalg::norm(&off) <= delta * (1.0 + 1e-12) {
            out.push(off);
        }
        let mut i = 0;
        loop {
            if i == d {
                return Ok(out);
            }
            if k[i] < r {
                k[i] += 1;
                break;
            }
            k[i] = -r;
            i += 1;
        }
    }
}

fn check_feasible(inst: &MinMaxInstance, x: &[f64], y: &[f64]) -> Result<()> {
    inst.check_dims(x, y)?;
    let (g1, g2) = inst.constraint_values(x, y)?;
    let worst = g1.max(g2);
    if worst > inst.nu + MEMBERSHIP_TOL || !linalg::in_unit_box(x, MEMBERSHIP_TOL) || !linalg::in_unit_box(y, MEMBERSHIP_TOL)
    {
        return Err(Error::InfeasibleProbe { value: worst, bound: inst.nu });
    }
    Ok(())
}

fn interval(poly: &BoxPolytope) -> Option<(Vec<f64>, Vec<f64>)> {
    poly.interval_bounds().ok().flatten()
}

/// Best single-coordinate gain along coordinate lines, one player at a time.
/// Exact for quadratic objectives, sampled otherwise.
struct LineSearch<'a> {
    inst: &'a MinMaxInstance,
    hessian: Option<Matrix>,
}

impl<'a> LineSearch<'a> {
    fn new(inst: &'a MinMaxInstance) -> Self {
        LineSearch { inst, hessian: inst.objective.to_quadratic().map(|q| q.hessian()) }
    }

    /// Gain of the moving player: `f0 − f` for the minimizer, `f − f0` for
    /// the maximizer.
    fn best_gain(&self, x: &[f64], y: &[f64], slice: &BoxPolytope, min_player: bool) -> Option<f64> {
        let (lo, hi) = interval(slice)?;
        let d = self.inst.dim;
        let f0 = self.inst.value(x, y);
        let (gx, gy) = self.inst.gradient(x, y);
        let base = if min_player { x } else { y };
        let mut best = 0.0f64;
        let mut probe = base.to_vec();
        for i in 0..d {
            let a = lo[i].max(base[i] - self.inst.delta).max(0.0);
            let b = hi[i].min(base[i] + self.inst.delta).min(1.0);
            if a > b {
                continue;
            }
            let mut ts = vec![a - base[i], b - base[i]];
            match &self.hessian {
                Some(h) => {
                    let (g, hii) = if min_player { (gx[i], h[(i, i)]) } else { (gy[i], h[(d + i, d + i)]) };
                    if hii != 0.0 {
                        let t = -g / hii;
                        if t > ts[0] && t < ts[1] {
                            ts.push(t);
                        }
                    }
                }
                None => {
                    let n = OPAQUE_LINE_SAMPLES - 1;
                    let (t0, t1) = (ts[0], ts[1]);
                    ts.extend((1..n).map(|k| t0 + (t1 - t0) * k as f64 / n as f64));
                }
            }
            for t in ts {
                probe[i] = base[i] + t;
                let gain = if min_player {
                    f0 - self.inst.value(&probe, y)
                } else {
                    self.inst.value(x, &probe) - f0
                };
                best = best.max(gain);
            }
            probe[i] = base[i];
        }
        Some(best)
    }
}

/// Largest single-coordinate gain of either player minus `ε`, or `None` when
/// a slice is not an interval product.
pub fn single_component_gain(inst: &MinMaxInstance, x: &[f64], y: &[f64]) -> Result<Option<f64>> {
    check_feasible(inst, x, y)?;
    let ls = LineSearch::new(inst);
    let g1 = ls.best_gain(x, y, &inst.slice_min(y), true);
    let g2 = ls.best_gain(x, y, &inst.slice_max(x), false);
    Ok(g1.zip(g2).map(|(a, b)| a.max(b) - inst.eps))
}

fn grid_gain(
    inst: &MinMaxInstance,
    x: &[f64],
    y: &[f64],
    offsets: &[Vec<f64>],
    min_player: bool,
) -> f64 {
    let f0 = inst.value(x, y);
    let (base, slice) = if min_player { (x, inst.slice_min(y)) } else { (y, inst.slice_max(x)) };
    let mut best = 0.0f64;
    for off in offsets {
        let p = linalg::project_box_sum(base, off);
        if !slice.contains(&p, 1e-12) {
            continue;
        }
        let gain = if min_player { f0 - inst.value(&p, y) } else { inst.value(x, &p) - f0 };
        best = best.max(gain);
    }
    best
}

fn local_certificate(inst: &MinMaxInstance, x: &[f64], y: &[f64], offsets: &[Vec<f64>], h: f64) -> Result<Certificate> {
    check_feasible(inst, x, y)?;
    let gain_min = grid_gain(inst, x, y, offsets, true);
    let gain_max = grid_gain(inst, x, y, offsets, false);
    let grid_violation = gain_min.max(gain_max) - inst.eps;
    let ls = LineSearch::new(inst);
    let line = ls
        .best_gain(x, y, &inst.slice_min(y), true)
        .zip(ls.best_gain(x, y, &inst.slice_max(x), false))
        .map(|(a, b)| a.max(b) - inst.eps);
    let residual = line.map_or(grid_violation, |l| l.max(grid_violation));
    let mut cert = Certificate::new(Method::LocalMinMax, linalg::concat(x, y), residual, 0.0, Sense::AtMost)
        .with_params(Params { eps: Some(inst.eps), delta: Some(inst.delta), nu: Some(inst.nu), ..Params::default() })
        .with_detail("grid_violation_min_player", gain_min - inst.eps)
        .with_detail("grid_violation_max_player", gain_max - inst.eps)
        .with_detail("ball_step", h)
        .with_detail("ball_points", offsets.len() as f64);
    if let Some(l) = line {
        cert = cert.with_detail("single_component_violation", l);
    }
    let g = if inst.lipschitz.is_finite() { inst.lipschitz } else { f64::NAN };
    cert.grid_slack = Some(g * h * (inst.dim as f64).sqrt());
    Ok(cert)
}

/// Largest gain either player gets from a unilateral deviation within
/// distance `δ`, minus `ε`.
///
/// Deviations are enumerated on a lattice of step `ball_step` inside the
/// δ-ball and the player's slice; when slices are interval products the
/// single-coordinate deviations are also maximised exactly. `grid_slack`
/// reports `G·h·√d`, the most a lattice can miss. Passes iff the residual is
/// `≤ 0`. An infeasible probe is an error.
pub fn verify_local_minmax(inst: &MinMaxInstance, x: &[f64], y: &[f64], ball_step: f64) -> Result<Certificate> {
    inst.check_dims(x, y)?;
    let offsets = ball_offsets(inst.dim, inst.delta, ball_step)?;
    local_certificate(inst, x, y, &offsets, ball_step)
}

fn grid_index_range(lo: f64, hi: f64, n: usize) -> std::ops::RangeInclusive<usize> {
    let a = ((lo * n as f64) - 1e-9).ceil().max(0.0) as usize;
    let b = ((hi * n as f64) + 1e-9).floor().min(n as f64);
    if b < 0.0 {
        return 1..=0;
    }
    a..=(b as usize)
}

fn decode(mut idx: usize, d: usize, n: usize) -> Vec<f64> {
    let mut out = vec![0.0; d];
    for v in out.iter_mut().rev() {
        *v = (idx % (n + 1)) as f64 / n as f64;
        idx /= n + 1;
    }
    out
}

fn grid_points_in(ranges: &[std::ops::RangeInclusive<usize>], n: usize) -> Vec<Vec<f64>> {
    let mut out = vec![Vec::new()];
    for r in ranges {
        let mut next = Vec::new();
        for prefix in &out {
            for k in r.clone() {
                let mut p: Vec<f64> = prefix.clone();
                p.push(k as f64 / n as f64);
                next.push(p);
            }
        }
        out = next;
    }
    out
}

/// Scans `(x, y)` on a grid of step `grid_step` in lexicographic order and
/// returns the first point whose local certificate passes, or `None`.
///
/// Candidate `y` values are restricted to the maximizer's slice when it is an
/// interval product; the exact single-coordinate check prunes candidates
/// before the full lattice check.
pub fn search_local_minmax(inst: &MinMaxInstance, grid_step: f64, ball_step: f64) -> Result<Option<Certificate>> {
    let n = (1.0 / grid_step).round() as usize;
    if n == 0 {
        return Err(Error::InvalidParameter(format!("grid step {grid_step} is larger than the box")));
    }
    let d = inst.dim;
    let total = ((n + 1) as f64).powi(d as i32);
    if total > MAX_SEARCH_POINTS as f64 {
        return Err(Error::BudgetExceeded { required: total, budget: MAX_SEARCH_POINTS as f64 });
    }
    let offsets = ball_offsets(d, inst.delta, ball_step)?;
    let found = (0..total as usize).into_par_iter().find_map_first(|xi| {
        let x = decode(xi, d, n);
        let ys = match interval(&inst.slice_max(&x)) {
            Some((lo, hi)) => {
                let ranges: Vec<_> = lo.iter().zip(&hi).map(|(a, b)| grid_index_range(*a, *b, n)).collect();
                grid_points_in(&ranges, n)
            }
            None => (0..total as usize).map(|yi| decode(yi, d, n)).collect(),
        };
        for y in ys {
            let Ok((g1, g2)) = inst.constraint_values(&x, &y) else { continue };
            if g1.max(g2) > inst.nu + MEMBERSHIP_TOL {
                continue;
            }
            match single_component_gain(inst, &x, &y) {
                Ok(Some(v)) if v > 0.0 => continue,
                Err(e) => return Some(Err(e)),
                _ => {}
            }
            match local_certificate(inst, &x, &y, &offsets, ball_step) {
                Ok(c) if c.passed => return Some(Ok(c.with_detail("search_grid_step", grid_step))),
                Ok(_) => {}
                Err(e) => return Some(Err(e)),
            }
        }
        None
    });
    found.transpose()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn ball_offsets_count() {
        let offs = ball_offsets(2, 1.0, 0.5).unwrap();
        // k in {-2..2}^2 with |k| <= 2: 13 points.
        assert_eq!(offs.len(), 13);
        assert!(ball_offsets(8, 1.0, 1e-3).is_err());
    }

    #[test]
    fn infeasible_probe_is_an_error() {
        let g = gallery::eq_not_vi();
        let r = verify_local_minmax(&g.instance, &[1.0], &[1.0], 0.01);
        assert!(matches!(r, Err(Error::InfeasibleProbe { .. })));
    }

    #[test]
    fn separation_point_is_local_minmax() {
        let g = gallery::eq_not_vi();
        let c = verify_local_minmax(&g.instance, &[1.0], &[0.0], 0.01).unwrap();
        assert!(c.passed, "{c:?}");
        assert!(c.grid_slack.unwrap() > 0.0);
    }
}
