use super::{ProblemKind, Pullback, ReductionTrace};
use crate::error::{Error, Result};
use crate::model::{
    Certificate, ConstraintSet, Constraints, GadgetKind, GadgetObjective, LinearVi, Method, MinMaxInstance,
    Objective, Params, Sense,
};
use crate::verify::{box_vi_residual, single_component_residual};

fn check_inputs(vi: &LinearVi, gamma: f64) -> Result<()> {
    vi.validate()?;
    if !vi.norm_certified {
        return Err(Error::InvalidInstance("gadget reductions need ‖D‖₁, ‖D‖∞ ≤ 1".into()));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(Error::InvalidParameter(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    Ok(())
}

fn objective(kind: GadgetKind, vi: &LinearVi) -> Result<Objective> {
    Ok(Objective::Gadget(GadgetObjective::new(kind, vi.matrix.clone(), vi.c.clone())?))
}

/// `f(x, y) = (x − y)ᵀ(Dx + c)` on `K = {‖x − y‖∞ ≤ ρ/4}` with
/// `δ = γρ/15`, `ε = γρ²/60`, `ν = 0` and declared `G = 5√d`, `L = 7`.
pub fn linearvi_to_jc_minmax(vi: &LinearVi, gamma: f64) -> Result<(MinMaxInstance, ReductionTrace)> {
    check_inputs(vi, gamma)?;
    let d = vi.dim();
    let rho = vi.rho;
    let ball = rho / 4.0;
    let delta = gamma * rho / 15.0;
    let eps = gamma * rho * rho / 60.0;
    let constraints = Constraints::joint(ConstraintSet::inf_norm_ball(d, ball))?;
    let inst = MinMaxInstance::new(objective(GadgetKind::JointlyConvex, vi)?, constraints, eps, delta, 0.0)?
        .with_bounds(5.0 * (d as f64).sqrt(), 7.0)?
        .in_local_regime()?;
    let trace = ReductionTrace::new(
        ProblemKind::Linearvi,
        ProblemKind::MinmaxJc,
        Pullback::MinimizerPoint,
        &[("rho_star", rho), ("ball_radius", ball), ("gamma", gamma), ("delta", delta), ("eps", eps), ("nu", 0.0)],
    );
    Ok((inst, trace))
}

/// `f(x, y) = xᵀ(Dy + c)` with the minimizer unconstrained and the
/// maximizer held to `‖x − y‖∞ ≤ ν`, `ν = ρδ/(4d)`; same `δ`, `ε` as the
/// jointly-convex gadget and declared `G = 3√d`, `L = 1`.
pub fn linearvi_to_bilinear_minmax(vi: &LinearVi, gamma: f64) -> Result<(MinMaxInstance, ReductionTrace)> {
    check_inputs(vi, gamma)?;
    let d = vi.dim();
    let rho = vi.rho;
    let delta = gamma * rho / 15.0;
    let eps = gamma * rho * rho / 60.0;
    let nu = rho * delta / (4.0 * d as f64);
    let constraints = Constraints::split(ConstraintSet::unconstrained(d), ConstraintSet::inf_norm_ball(d, 0.0))?;
    let inst = MinMaxInstance::new(objective(GadgetKind::Bilinear, vi)?, constraints, eps, delta, nu)?
        .with_bounds(3.0 * (d as f64).sqrt(), 1.0)?
        .in_local_regime()?;
    let trace = ReductionTrace::new(
        ProblemKind::Linearvi,
        ProblemKind::MinmaxBilinear,
        Pullback::MinimizerPoint,
        &[("rho_star", rho), ("gamma", gamma), ("delta", delta), ("eps", eps), ("nu", nu)],
    );
    Ok((inst, trace))
}

/// Reads `x` as a VI candidate and reports its single-component residual
/// `min_i min_{z'_i∈{0,1}} (Dx + c)_i(z'_i − x_i)` against `−ρ`.
pub fn minmax_solution_to_linearvi(vi: &LinearVi, x: &[f64], trace: &ReductionTrace) -> Result<Certificate> {
    crate::error::check_dim(vi.dim(), x.len())?;
    let rho = trace.constant("rho_star").unwrap_or(vi.rho);
    let fx = vi.operator(x);
    Ok(Certificate::new(Method::LinearViPullback, x.to_vec(), single_component_residual(&fx, x), -rho, Sense::AtLeast)
        .with_params(Params { rho: Some(rho), ..Params::default() })
        .with_detail("box_residual", box_vi_residual(&fx, x)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;
    use crate::verify::verify_local_minmax;

    fn vi1(d: f64, c: f64) -> LinearVi {
        LinearVi::new(Matrix::from_rows(vec![vec![d]]).unwrap(), vec![c], 0.088 / 6.0).unwrap()
    }

    #[test]
    fn jc_constants() {
        let (inst, trace) = linearvi_to_jc_minmax(&vi1(0.0, -1.0), 1.0).unwrap();
        let rho = 0.088 / 6.0;
        assert_eq!(trace.constant("delta"), Some(rho / 15.0));
        assert_eq!(trace.constant("eps"), Some(rho * rho / 60.0));
        assert_eq!(trace.constant("ball_radius"), Some(rho / 4.0));
        assert!(inst.delta < (2.0 * inst.eps / 7.0).sqrt());
        assert!((inst.value(&[0.5], &[0.2]) + 0.3).abs() < 1e-15);
    }

    #[test]
    fn jc_one_dimensional_solution_pulls_back() {
        let vi = vi1(0.0, -1.0);
        let (inst, trace) = linearvi_to_jc_minmax(&vi, 1.0).unwrap();
        let cert = verify_local_minmax(&inst, &[1.0], &[1.0], inst.delta / 20.0).unwrap();
        assert!(cert.passed);
        let back = minmax_solution_to_linearvi(&vi, &[1.0], &trace).unwrap();
        assert_eq!(back.residual, 0.0);
        assert!(back.passed);
        // Far from the boundary the minimizer gains about δ.
        assert!(!verify_local_minmax(&inst, &[0.5], &[0.5], inst.delta / 20.0).unwrap().passed);
    }

    #[test]
    fn bilinear_constants_and_zero_game() {
        let vi = vi1(0.0, 0.0);
        let (inst, trace) = linearvi_to_bilinear_minmax(&vi, 0.5).unwrap();
        let rho = 0.088 / 6.0;
        let delta = 0.5 * rho / 15.0;
        assert_eq!(trace.constant("nu"), Some(rho * delta / 4.0));
        let nu = inst.nu;
        let cert = verify_local_minmax(&inst, &[0.3], &[0.3 + nu], inst.delta / 10.0).unwrap();
        assert!(cert.passed);
        assert_eq!(minmax_solution_to_linearvi(&vi, &[0.3], &trace).unwrap().residual, 0.0);
    }

    #[test]
    fn uncertified_norms_are_rejected() {
        let vi = LinearVi::new(Matrix::from_rows(vec![vec![1.0, 1.0], vec![0.0, 0.0]]).unwrap(), vec![0.0; 2], 0.01)
            .unwrap();
        assert!(!vi.norm_certified);
        assert!(linearvi_to_jc_minmax(&vi, 1.0).is_err());
        assert!(linearvi_to_bilinear_minmax(&vi1(0.0, 0.0), 0.0).is_err());
    }
}
