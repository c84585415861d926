//! Projected gradient descent-ascent maps, their residuals, a damped
//! iteration driver, an extragradient solver for affine VIs and the
//! parameter conversions between the solution concepts.

mod extragradient;
mod params;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::MinMaxInstance;
use crate::polytope::{project_polytope, BoxPolytope, ProjectionOptions};

pub use extragradient::{extragradient_vi, ExtragradientOptions, ExtragradientResult};
pub use params::{
    alpha_from_eps_delta, eps_delta_from_alpha, globalization_bound, gda_to_minmax_tolerance,
    qvi_alpha, qvi_reverse_bound,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MapKind {
    /// Per-player projections onto `K₁^ν(y)` and `K₂^ν(x)`.
    Gda,
    /// One joint projection onto `K` (jointly-convex instances only).
    Sgda,
}

fn project_slice(poly: &BoxPolytope, p: &[f64], what: &str) -> Result<Vec<f64>> {
    project_polytope(poly, p, &ProjectionOptions::default()).map_err(|e| match e {
        Error::Infeasible => Error::PromiseViolation(format!("empty feasible slice {what}")),
        e => e,
    })
}

/// `(Π_{K₁^ν(y)}(x − ∇x f), Π_{K₂^ν(x)}(y + ∇y f))`.
pub fn gda_map(inst: &MinMaxInstance, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    inst.check_dims(x, y)?;
    let (gx, gy) = inst.gradient(x, y);
    let xp = project_slice(&inst.slice_min(y), &linalg::sub(x, &gx), "of the minimizer")?;
    let yp = project_slice(&inst.slice_max(x), &linalg::add(y, &gy), "of the maximizer")?;
    Ok((xp, yp))
}

/// `Π_K(x − ∇x f, y + ∇y f)`.
pub fn sgda_map(inst: &MinMaxInstance, x: &[f64], y: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    inst.check_dims(x, y)?;
    let k = inst.joint_set()?;
    let (gx, gy) = inst.gradient(x, y);
    let p = linalg::concat(&linalg::sub(x, &gx), &linalg::add(y, &gy));
    let mut z = project_slice(&k, &p, "K")?;
    let yp = z.split_off(inst.dim);
    Ok((z, yp))
}

pub fn apply_map(inst: &MinMaxInstance, x: &[f64], y: &[f64], kind: MapKind) -> Result<(Vec<f64>, Vec<f64>)> {
    match kind {
        MapKind::Gda => gda_map(inst, x, y),
        MapKind::Sgda => sgda_map(inst, x, y),
    }
}

/// `‖(x, y) − F(x, y)‖`.
pub fn residual(inst: &MinMaxInstance, x: &[f64], y: &[f64], kind: MapKind) -> Result<f64> {
    let (xp, yp) = apply_map(inst, x, y, kind)?;
    Ok(linalg::norm(&linalg::concat(&linalg::sub(x, &xp), &linalg::sub(y, &yp))))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GdaResult {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub residual: f64,
    pub iterations: usize,
    pub map_kind: MapKind,
    pub converged: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterateOptions {
    pub damping: f64,
    pub max_iters: usize,
    pub target_residual: f64,
}

impl Default for IterateOptions {
    fn default() -> Self {
        IterateOptions { damping: 0.5, max_iters: 10_000, target_residual: 1e-8 }
    }
}

/// Damped fixed-point iteration `z ← (1−λ)z + λ·F(z)`, returning the best
/// point seen. `converged` is false when the budget ran out first.
pub fn iterate(
    inst: &MinMaxInstance,
    start: (&[f64], &[f64]),
    kind: MapKind,
    opts: &IterateOptions,
) -> Result<GdaResult> {
    let lambda = opts.damping;
    if !(lambda > 0.0 && lambda <= 1.0) {
        return Err(Error::InvalidParameter(format!("damping must lie in (0, 1], got {lambda}")));
    }
    let (mut x, mut y) = (start.0.to_vec(), start.1.to_vec());
    inst.check_dims(&x, &y)?;
    let mut best = GdaResult {
        x: x.clone(),
        y: y.clone(),
        residual: f64::INFINITY,
        iterations: 0,
        map_kind: kind,
        converged: false,
    };
    for it in 0..=opts.max_iters {
        let (xp, yp) = apply_map(inst, &x, &y, kind)?;
        let r = linalg::norm(&linalg::concat(&linalg::sub(&x, &xp), &linalg::sub(&y, &yp)));
        if r < best.residual {
            best = GdaResult { x: x.clone(), y: y.clone(), residual: r, iterations: it, map_kind: kind, converged: false };
        }
        if r <= opts.target_residual {
            best.converged = true;
            return Ok(best);
        }
        x = x.iter().zip(&xp).map(|(a, b)| (1.0 - lambda) * a + lambda * b).collect();
        y = y.iter().zip(&yp).map(|(a, b)| (1.0 - lambda) * a + lambda * b).collect();
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::model::{ConstraintSet, Constraints, Objective};

    fn zero_instance(d: usize) -> MinMaxInstance {
        let c = Constraints::split(ConstraintSet::unconstrained(d), ConstraintSet::unconstrained(d)).unwrap();
        MinMaxInstance::new(Objective::zero(d), c, 0.1, 0.1, 0.0).unwrap()
    }

    #[test]
    fn separation_point_is_gda_fixed() {
        let g = gallery::eq_not_vi();
        let (xp, yp) = gda_map(&g.instance, &[1.0], &[0.0]).unwrap();
        assert_eq!((xp, yp), (vec![1.0], vec![0.0]));
        assert_eq!(residual(&g.instance, &[1.0], &[0.0], MapKind::Gda).unwrap(), 0.0);
    }

    #[test]
    fn separation_point_is_not_sgda_fixed() {
        let g = gallery::eq_not_vi();
        let (xp, yp) = sgda_map(&g.instance, &[1.0], &[0.0]).unwrap();
        assert!((xp[0] - 0.6).abs() < 1e-12 && (yp[0] - 0.4).abs() < 1e-12);
        let r = residual(&g.instance, &[1.0], &[0.0], MapKind::Sgda).unwrap();
        assert!((r - 0.4 * 2f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn centre_point_hand_values() {
        let g = gallery::eq_not_vi();
        let (xp, yp) = gda_map(&g.instance, &[0.5], &[0.5]).unwrap();
        assert!((xp[0] - 0.5).abs() < 1e-15 && (yp[0] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn zero_objective_maps_are_identity() {
        let inst = zero_instance(2);
        let (x, y) = (vec![0.3, 0.7], vec![0.1, 0.9]);
        assert_eq!(gda_map(&inst, &x, &y).unwrap(), (x.clone(), y.clone()));
        assert_eq!(residual(&inst, &x, &y, MapKind::Gda).unwrap(), 0.0);
        let r = iterate(&inst, (&x, &y), MapKind::Gda, &IterateOptions::default()).unwrap();
        assert_eq!((r.iterations, r.residual), (0, 0.0));
        assert!(matches!(sgda_map(&inst, &x, &y), Err(Error::WrongConstraintKind)));
    }

    #[test]
    fn iterate_from_fixed_point_stops_immediately() {
        let g = gallery::eq_not_vi();
        let r = iterate(&g.instance, (&[1.0], &[0.0]), MapKind::Gda, &IterateOptions::default()).unwrap();
        assert_eq!((r.iterations, r.residual, r.converged), (0, 0.0, true));
    }

    #[test]
    fn damped_safe_iteration_converges_to_vi_solution() {
        let g = gallery::eq_not_vi();
        let opts = IterateOptions { damping: 0.5, max_iters: 10_000, target_residual: 1e-7 };
        let r = iterate(&g.instance, (&[0.5], &[0.5]), MapKind::Sgda, &opts).unwrap();
        assert!(r.converged && r.residual < 1e-6);
        let again = residual(&g.instance, &r.x, &r.y, MapKind::Sgda).unwrap();
        assert!((again - r.residual).abs() <= 1e-12);
        let vi = crate::reductions::jointly_convex_vi(&g.instance).unwrap();
        let cert = crate::verify::verify_qvi(&vi, &linalg::concat(&r.x, &r.y)).unwrap();
        assert!(cert.residual >= -1e-3, "{cert:?}");
    }

    #[test]
    fn empty_slice_is_a_promise_violation() {
        let g1 = ConstraintSet::new(vec![crate::model::BilinearPiece::constant(1, 0.5)]).unwrap();
        let c = Constraints::split(g1, ConstraintSet::unconstrained(1)).unwrap();
        let inst = MinMaxInstance::new(Objective::zero(1), c, 0.1, 0.1, 0.0).unwrap();
        assert!(matches!(gda_map(&inst, &[0.0], &[0.0]), Err(Error::PromiseViolation(_))));
    }
}
