use num::{BigRational, Signed, ToPrimitive, Zero};

use super::MEMBERSHIP_TOL;
use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{Certificate, CorrespondenceSpec, Method, Params, QviInstance, Sense};
use crate::polytope::lp_min;

/// Checks `z ∈ Q_ν(z)` and computes
/// `min_{z' ∈ Q_ν(z)} F(z)ᵀ(z' − z)` with the LP solver; passes iff `z` is a
/// member and the residual is at least `−ε`.
pub fn verify_qvi(qvi: &QviInstance, z: &[f64]) -> Result<Certificate> {
    crate::error::check_dim(qvi.dim(), z.len())?;
    let q = qvi.correspondence.at(z);
    let fz = qvi.operator_at(z);
    let (argmin, value) = lp_min(&q, &fz).map_err(|e| match e {
        Error::Infeasible => Error::PromiseViolation("Q_nu(z) is empty".into()),
        e => e,
    })?;
    let membership = q.max_violation(z);
    let member = membership <= MEMBERSHIP_TOL;
    let fz_z = linalg::dot(&fz, z);
    // z itself is a candidate when it is a member.
    let residual = if member { value.min(fz_z) - fz_z } else { value - fz_z };
    let mut cert = Certificate::new(Method::Qvi, z.to_vec(), residual, -qvi.eps, Sense::AtLeast)
        .with_params(Params { eps: Some(qvi.eps), nu: Some(qvi.nu()), ..Params::default() })
        .with_detail("membership_violation", membership)
        .with_detail("lp_value", value);
    for (i, v) in argmin.iter().enumerate() {
        cert = cert.with_detail(&format!("argmin_{i}"), *v);
    }
    Ok(cert.require(member, "point is not in its own correspondence value"))
}

fn exact(v: f64) -> BigRational {
    BigRational::from_float(v).expect("finite value")
}

/// Exact rational evaluation of `max_j row_j(z, z) − ν` together with the
/// box constraints; passes iff the value is `≤ 0`.
pub fn verify_kakutani(spec: &CorrespondenceSpec, z: &[f64]) -> Certificate {
    let d = spec.dim;
    let zq: Vec<BigRational> = z.iter().map(|v| exact(*v)).collect();
    let nu = exact(spec.nu);
    let one = BigRational::from_integer(1.into());
    let mut worst: Option<BigRational> = None;
    let mut bump = |v: BigRational| {
        if worst.as_ref().is_none_or(|w| v > *w) {
            worst = Some(v);
        }
    };
    for v in &zq {
        bump(-v.clone());
        bump(v - &one);
    }
    for row in &spec.rows {
        let mut acc = exact(row.c);
        for i in 0..d {
            acc += exact(row.b1[i]) * &zq[i] + exact(row.b2[i]) * &zq[i];
            if let Some(b) = &row.b {
                for j in 0..d {
                    if b[(i, j)] != 0.0 {
                        acc += &zq[i] * exact(b[(i, j)]) * &zq[j];
                    }
                }
            }
        }
        bump(acc - &nu);
    }
    let worst = worst.unwrap_or_else(BigRational::zero);
    let residual = worst.to_f64().unwrap_or(f64::NAN);
    let mut cert = Certificate::new(Method::Kakutani, z.to_vec(), residual, 0.0, Sense::AtMost)
        .with_params(Params { nu: Some(spec.nu), ..Params::default() });
    // Decide on the exact value, not on its rounding.
    cert.passed = !worst.is_positive() && z.len() == d;
    cert
}
