use crate::error::{Error, Result};

/// `√r − (G+δ)` with `r = (G+δ)² + 4s`, evaluated as `4s/(√r + G + δ)` to
/// avoid cancellation.
fn root_gap(g: f64, l: f64, delta: f64, eps: f64) -> Result<f64> {
    let r = radicand(g, l, delta, eps)?;
    let denom = r.sqrt() + g + delta;
    let slack = eps - l / 2.0 * delta * delta;
    Ok(if denom > 0.0 { 4.0 * slack / denom } else { 0.0 })
}

fn radicand(g: f64, l: f64, delta: f64, eps: f64) -> Result<f64> {
    let slack = eps - l / 2.0 * delta * delta;
    if slack < 0.0 {
        return Err(Error::InvalidParameter(format!("eps = {eps} is below L·δ²/2 = {}", l / 2.0 * delta * delta)));
    }
    let r = (g + delta) * (g + delta) + 4.0 * slack;
    if r < 0.0 {
        return Err(Error::InvalidParameter("negative radicand".into()));
    }
    Ok(r)
}

/// Fixed-point tolerance α that makes every α-fixed point of the
/// descent-ascent map an (ε, δ)-local min-max point.
pub fn alpha_from_eps_delta(g: f64, l: f64, delta: f64, eps: f64) -> Result<f64> {
    Ok(0.5 * root_gap(g, l, delta, eps)?)
}

/// `(ε, δ) = (α²L/(5L+2)², α/(5L+2))`: local min-max tolerances whose
/// solutions are α-fixed points.
pub fn eps_delta_from_alpha(l: f64, alpha: f64) -> (f64, f64) {
    let k = 5.0 * l + 2.0;
    (alpha * alpha * l / (k * k), alpha / k)
}

/// QVI tolerance implied by an (ε, δ)-local min-max point.
pub fn qvi_alpha(g: f64, l: f64, delta: f64, eps: f64) -> Result<f64> {
    let t = root_gap(g, l, delta, eps)?;
    Ok(t * t / 8.0)
}

/// `√d(3Lδ + 2ε/δ)`: residual magnitude guaranteed for the QVI formulation
/// of an (ε, δ)-local min-max point.
pub fn qvi_reverse_bound(l: f64, delta: f64, eps: f64, d: usize) -> Result<f64> {
    if delta <= 0.0 {
        return Err(Error::InvalidParameter("delta must be positive".into()));
    }
    Ok((d as f64).sqrt() * (3.0 * l * delta + 2.0 * eps / delta))
}

/// `α(1 + G∞) + Lδ²/2`: single-coordinate deviation gain allowed at an
/// α-fixed point, with `G∞` the largest absolute gradient component.
pub fn gda_to_minmax_tolerance(alpha: f64, g_inf: f64, l: f64, delta: f64) -> f64 {
    alpha * (1.0 + g_inf) + l * delta * delta / 2.0
}

/// `ε√d/δ`: global suboptimality of a local solution of an objective
/// convex in the minimizer's variable.
pub fn globalization_bound(eps: f64, delta: f64, d: usize) -> f64 {
    eps * (d as f64).sqrt() / delta
}
