use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, Matrix};
use crate::polytope::project_box;
use crate::verify::box_vi_residual;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtragradientOptions {
    /// Defaults to `0.25 / max(1, ‖D‖₂)` with a power-iteration estimate.
    pub step: Option<f64>,
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for ExtragradientOptions {
    fn default() -> Self {
        ExtragradientOptions { step: None, tol: 1e-6, max_iters: 200_000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtragradientResult {
    pub point: Vec<f64>,
    /// `min_{z' ∈ [0,1]^d} F(z)ᵀ(z' − z)` at `point`.
    pub residual: f64,
    pub iterations: usize,
    pub step: f64,
    pub converged: bool,
}

/// Two-step extragradient for `F(z) = Dz + c` over `[0,1]^d`, started at the
/// centre. Stops once the VI residual is at least `−tol`; otherwise returns
/// the best iterate with `converged = false`.
pub fn extragradient_vi(matrix: &Matrix, c: &[f64], opts: &ExtragradientOptions) -> Result<ExtragradientResult> {
    let d = c.len();
    check_dim(d, matrix.rows())?;
    check_dim(d, matrix.cols())?;
    let step = opts.step.unwrap_or_else(|| 0.25 / matrix.power_norm_estimate(200).max(1.0));
    if !(step > 0.0) {
        return Err(Error::InvalidParameter("step must be positive".into()));
    }
    let f = |z: &[f64]| linalg::add(&matrix.mul_vec(z), c);
    let mut z = vec![0.5; d];
    let mut best = ExtragradientResult { point: z.clone(), residual: f64::NEG_INFINITY, iterations: 0, step, converged: false };
    for it in 0..=opts.max_iters {
        let fz = f(&z);
        let r = box_vi_residual(&fz, &z);
        if r > best.residual {
            best = ExtragradientResult { point: z.clone(), residual: r, iterations: it, step, converged: false };
        }
        if r >= -opts.tol {
            best.converged = true;
            return Ok(best);
        }
        let half = project_box(&linalg::axpy(&z, -step, &fz));
        z = project_box(&linalg::axpy(&z, -step, &f(&half)));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interior_zero() {
        let r = extragradient_vi(&Matrix::identity(1), &[-0.5], &ExtragradientOptions::default()).unwrap();
        assert!(r.converged && (r.point[0] - 0.5).abs() < 1e-6);
    }

    #[test]
    fn boundary_solution() {
        let r = extragradient_vi(&Matrix::zeros(1, 1), &[-1.0], &ExtragradientOptions::default()).unwrap();
        assert!(r.converged && (r.point[0] - 1.0).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn skew_operator_of_matching_pennies() {
        let third = 1.0 / 3.0;
        let d = Matrix::from_rows(vec![vec![0.0, -third], vec![third, 0.0]]).unwrap();
        let opts = ExtragradientOptions { tol: 1e-9, ..Default::default() };
        let r = extragradient_vi(&d, &[1.0 / 6.0, -1.0 / 6.0], &opts).unwrap();
        assert!(r.converged, "{r:?}");
        assert!(linalg::dist(&r.point, &[0.5, 0.5]) < 1e-6, "{r:?}");
    }
}
