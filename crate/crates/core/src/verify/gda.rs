use super::MEMBERSHIP_TOL;
use crate::dynamics::{self, MapKind};
use crate::error::Result;
use crate::linalg;
use crate::model::{Certificate, Method, MinMaxInstance, Params, Sense};

/// Passes iff `(x, y)` is feasible and `‖(x, y) − F_GDA(x, y)‖ ≤ α`.
pub fn verify_gda_fixed_point(inst: &MinMaxInstance, x: &[f64], y: &[f64], alpha: f64) -> Result<Certificate> {
    inst.check_dims(x, y)?;
    let r = dynamics::residual(inst, x, y, MapKind::Gda)?;
    let (g1, g2) = inst.constraint_values(x, y)?;
    let feasible = g1.max(g2) <= inst.nu + MEMBERSHIP_TOL
        && linalg::in_unit_box(x, MEMBERSHIP_TOL)
        && linalg::in_unit_box(y, MEMBERSHIP_TOL);
    Ok(Certificate::new(Method::GdaFixedPoint, linalg::concat(x, y), r, alpha, Sense::AtMost)
        .with_params(Params { alpha: Some(alpha), nu: Some(inst.nu), ..Params::default() })
        .with_detail("constraint_g1", g1)
        .with_detail("constraint_g2", g2)
        .require(feasible, "point violates the constraints"))
}
