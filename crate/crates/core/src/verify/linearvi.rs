use crate::linalg;
use crate::model::{Certificate, LinearVi, Method, Params, Sense};

/// `min_{z' ∈ [0,1]^d} F(z)ᵀ(z' − z)`: the minimum decomposes over
/// coordinates, each attained at a corner.
pub fn box_vi_residual(fz: &[f64], z: &[f64]) -> f64 {
    fz.iter().zip(z).map(|(f, zi)| (f * (0.0 - zi)).min(f * (1.0 - zi))).sum()
}

/// `min_i min_{z'_i ∈ {0,1}} F_i(z)(z'_i − z_i)`.
pub fn single_component_residual(fz: &[f64], z: &[f64]) -> f64 {
    fz.iter().zip(z).map(|(f, zi)| (f * (0.0 - zi)).min(f * (1.0 - zi))).fold(0.0, f64::min)
}

/// Passes iff `(Dz + c)ᵀ(z' − z) ≥ −ρ` for every `z'` in the box.
pub fn verify_linearvi(vi: &LinearVi, z: &[f64]) -> Certificate {
    let fz = vi.operator(z);
    let residual = box_vi_residual(&fz, z);
    Certificate::new(Method::LinearVi, z.to_vec(), residual, -vi.rho, Sense::AtLeast)
        .with_params(Params { rho: Some(vi.rho), ..Params::default() })
        .with_detail("single_component_residual", single_component_residual(&fz, z))
        .require(z.len() == vi.dim() && linalg::in_unit_box(z, 0.0), "point outside the unit box")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Matrix;

    fn vi(d: Vec<Vec<f64>>, c: Vec<f64>) -> LinearVi {
        LinearVi::new(Matrix::from_rows(d).unwrap(), c, 0.01).unwrap()
    }

    #[test]
    fn constant_operator_examples() {
        let v = vi(vec![vec![0.0]], vec![1.0]);
        let at0 = verify_linearvi(&v, &[0.0]);
        assert_eq!(at0.residual, 0.0);
        assert!(at0.passed);
        let at1 = verify_linearvi(&v, &[1.0]);
        assert_eq!(at1.residual, -1.0);
        assert!(!at1.passed);
    }

    #[test]
    fn matching_pennies_centre() {
        let t = 1.0 / 3.0;
        let v = vi(vec![vec![0.0, -t], vec![t, 0.0]], vec![1.0 / 6.0, -1.0 / 6.0]);
        let c = verify_linearvi(&v, &[0.5, 0.5]);
        assert!(c.residual.abs() < 1e-16 && c.passed);
    }
}
