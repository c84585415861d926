use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::QviInstance;
use crate::polytope::{feasibility, lp_min, project_polytope, BoxPolytope, ProjectionOptions};

/// What the selector does when `Q_γ(z)` is empty.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EmptySlicePolicy {
    /// Report a promise violation.
    Abort,
    /// Project onto `Q_t(z)` for the smallest `t ≥ γ` making it non-empty.
    #[default]
    MinimalRelaxation,
}

/// Selector output and the relaxation actually used.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub point: Vec<f64>,
    pub relaxation: f64,
}

/// `p_{γ,η}(z) = Π_{Q_γ(z)}(z − F(z)/η)`. Errors when `Q_γ(z)` is empty.
pub fn proximal_selector(qvi: &QviInstance, z: &[f64], gamma: f64, eta: f64) -> Result<Vec<f64>> {
    select(qvi, z, gamma, eta, EmptySlicePolicy::Abort).map(|s| s.point)
}

/// Smallest `t` with `Q_t(z) ≠ ∅`, from one LP in `(z', t / T)`.
pub fn minimal_relaxation(qvi: &QviInstance, z: &[f64]) -> Result<f64> {
    let spec = &qvi.correspondence;
    let d = spec.dim;
    let rows: Vec<(Vec<f64>, f64)> = spec.rows.iter().map(|r| r.row_in_first(z, 0.0)).collect();
    let scale = 1.0 + rows.iter().map(|(a, b)| a.iter().map(|v| v.abs()).sum::<f64>() + b.abs()).fold(0.0, f64::max);
    let lifted = rows
        .into_iter()
        .map(|(mut a, b)| {
            a.push(-scale);
            (a, b)
        })
        .collect();
    let mut cost = vec![0.0; d + 1];
    cost[d] = 1.0;
    let (_, s) = lp_min(&BoxPolytope::from_rows(d + 1, lifted), &cost)?;
    Ok((s * scale).max(0.0))
}

pub(crate) fn select(qvi: &QviInstance, z: &[f64], gamma: f64, eta: f64, policy: EmptySlicePolicy) -> Result<Selection> {
    let target = linalg::axpy(z, -1.0 / eta, &qvi.operator_at(z));
    let opts = ProjectionOptions::default();
    let q = qvi.correspondence.polytope(z, gamma);
    match project_polytope(&q, &target, &opts) {
        Ok(point) => Ok(Selection { point, relaxation: gamma }),
        Err(Error::Infeasible) => match policy {
            EmptySlicePolicy::Abort => Err(Error::PromiseViolation(format!("Q_gamma(z) is empty at z = {z:?}"))),
            EmptySlicePolicy::MinimalRelaxation => {
                let t = minimal_relaxation(qvi, z)?;
                let mut relaxation = gamma.max(t * (1.0 + 1e-9) + 1e-12);
                let mut q = qvi.correspondence.polytope(z, relaxation);
                // Round-off can leave the pinned set empty; widen slightly.
                while feasibility(&q).is_none() {
                    relaxation = relaxation * (1.0 + 1e-6) + 1e-10;
                    q = qvi.correspondence.polytope(z, relaxation);
                }
                Ok(Selection { point: project_polytope(&q, &target, &opts)?, relaxation })
            }
        },
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::linalg::Matrix;
    use crate::model::{CorrespondenceSpec, Operator};

    #[test]
    fn centred_operator_selects_half() {
        let op = Operator::affine(Matrix::identity(1), vec![-0.5]).unwrap();
        let qvi = QviInstance::new(CorrespondenceSpec::new(1, vec![], 0.0).unwrap(), op, 0.0).unwrap();
        for v in [0.0, 0.3, 0.5, 1.0] {
            assert_eq!(proximal_selector(&qvi, &[v], 0.0, 1.0).unwrap(), vec![0.5]);
        }
    }

    #[test]
    fn irrational_selection_stays_put_when_feasible() {
        let qvi = QviInstance::kakutani(gallery::irrational_kakutani()).unwrap();
        let p = proximal_selector(&qvi, &[0.7, 0.7], 0.01, 1.0).unwrap();
        assert!(qvi.correspondence.polytope(&[0.7, 0.7], 0.01).contains(&p, 1e-9));
        assert!((p[0] - 0.7).abs() < 1e-9 && (p[1] - 0.7).abs() < 0.02);
    }

    #[test]
    fn empty_value_aborts_or_relaxes() {
        let qvi = QviInstance::kakutani(gallery::irrational_kakutani()).unwrap();
        let z = [0.4, 0.4];
        assert!(matches!(proximal_selector(&qvi, &z, 0.01, 1.0), Err(Error::PromiseViolation(_))));
        // 0.4·y' ≥ 1/2 − t needs t ≥ 0.1.
        let t = minimal_relaxation(&qvi, &z).unwrap();
        assert!((t - 0.1).abs() < 1e-9, "{t}");
        let s = select(&qvi, &z, 0.01, 1.0, EmptySlicePolicy::MinimalRelaxation).unwrap();
        assert!(s.relaxation >= 0.1 && s.relaxation < 0.1 + 1e-6);
        assert!((s.point[1] - 1.0).abs() < 1e-6);
    }
}
