use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::MEMBERSHIP_TOL;
use crate::dynamics::globalization_bound;
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{Certificate, Method, MinMaxInstance, Params, Sense};
use crate::polytope::lp_min;

const CONVEXITY_TRIALS: usize = 1000;
const MAX_GRID_POINTS: f64 = 5e6;

fn check_convex_in_x(inst: &MinMaxInstance, y: &[f64]) -> Result<()> {
    if let Some(h) = inst.objective.x_hessian() {
        let lo = h.symmetric_eigenvalues().first().copied().unwrap_or(0.0);
        if lo < -1e-12 {
            return Err(Error::NotConvex(format!("x-Hessian has eigenvalue {lo}")));
        }
        return Ok(());
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let d = inst.dim;
    for _ in 0..CONVEXITY_TRIALS {
        let a: Vec<f64> = (0..d).map(|_| rng.gen()).collect();
        let b: Vec<f64> = (0..d).map(|_| rng.gen()).collect();
        let m = linalg::scale(&linalg::add(&a, &b), 0.5);
        let gap = inst.value(&m, y) - 0.5 * (inst.value(&a, y) + inst.value(&b, y));
        if gap > 1e-12 {
            return Err(Error::NotConvex(format!("midpoint gap {gap:e}")));
        }
    }
    Ok(())
}

/// Checks that `x` is globally `ε√d/δ`-optimal for the minimizer over
/// `K₁^ν(y)`: residual `f(x, y) − min f(·, y) − ε√d/δ`, passing iff `≤ 0`.
///
/// The minimum is an LP when `f` is affine in `x`, otherwise a grid search
/// of step `grid_step` whose slack is reported. Errors if `f(·, y)` is not
/// convex.
pub fn verify_globalization(
    inst: &MinMaxInstance,
    x: &[f64],
    y: &[f64],
    eps: f64,
    delta: f64,
    grid_step: f64,
) -> Result<Certificate> {
    inst.check_dims(x, y)?;
    check_convex_in_x(inst, y)?;
    let d = inst.dim;
    let bound = globalization_bound(eps, delta, d);
    let slice = inst.slice_min(y);
    let f0 = inst.value(x, y);
    let (fmin, slack) = if inst.objective.is_linear_in_x() {
        let (gx, _) = inst.gradient(x, y);
        let (xs, _) = lp_min(&slice, &gx)?;
        (inst.value(&xs, y), None)
    } else {
        let n = (1.0 / grid_step).round().max(1.0) as usize;
        let total = ((n + 1) as f64).powi(d as i32);
        if total > MAX_GRID_POINTS {
            return Err(Error::BudgetExceeded { required: total, budget: MAX_GRID_POINTS });
        }
        let mut best = f64::INFINITY;
        let mut p = vec![0.0; d];
        for idx in 0..total as usize {
            let mut k = idx;
            for v in p.iter_mut().rev() {
                *v = (k % (n + 1)) as f64 / n as f64;
                k /= n + 1;
            }
            if slice.contains(&p, MEMBERSHIP_TOL) {
                best = best.min(inst.value(&p, y));
            }
        }
        (best.min(f0), Some(inst.lipschitz * (d as f64).sqrt() / n as f64))
    };
    let mut cert = Certificate::new(Method::Globalization, linalg::concat(x, y), f0 - fmin - bound, 0.0, Sense::AtMost)
        .with_params(Params { eps: Some(eps), delta: Some(delta), nu: Some(inst.nu), ..Params::default() })
        .with_detail("global_gap", f0 - fmin)
        .with_detail("bound", bound);
    cert.grid_slack = slack;
    Ok(cert.require(slice.contains(x, MEMBERSHIP_TOL), "x is outside its slice"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;

    #[test]
    fn nonconvex_x_block_is_rejected() {
        let mut g = gallery::eq_not_vi();
        // Flip the sign so f is concave in x.
        if let crate::model::Objective::Quadratic(q) = &mut g.instance.objective {
            q.m = q.m.scaled(-1.0);
        }
        let r = verify_globalization(&g.instance, &[1.0], &[0.0], 1e-3, 0.3, 0.01);
        assert!(matches!(r, Err(Error::NotConvex(_))));
    }

    #[test]
    fn separation_point_is_globally_optimal_for_min_player() {
        let g = gallery::eq_not_vi();
        let c = verify_globalization(&g.instance, &[1.0], &[0.0], 1e-3, 0.3, 0.001).unwrap();
        assert!(c.passed, "{c:?}");
    }
}
