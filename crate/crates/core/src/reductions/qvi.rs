use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::Matrix;
use crate::model::{
    BilinearPiece, Constraints, CorrespondenceSpec, Evaluator, MinMaxInstance, Objective, Operator, QuadraticForm,
    QviInstance, VectorField,
};

struct PseudoGradient {
    dim: usize,
    evaluator: Arc<dyn Evaluator>,
}

impl VectorField for PseudoGradient {
    fn eval(&self, z: &[f64]) -> Vec<f64> {
        let (x, y) = z.split_at(self.dim);
        let (gx, gy) = self.evaluator.gradient(x, y);
        gx.into_iter().chain(gy.into_iter().map(|v| -v)).collect()
    }
}

/// The pseudo-gradient `(∇x f, −∇y f)` as an operator on `z = (x, y)`.
fn pseudo_gradient_operator(objective: &Objective) -> Result<Operator> {
    let d = objective.dim();
    match objective {
        Objective::Opaque { evaluator, .. } => Ok(Operator::Opaque {
            dim: 2 * d,
            field: Arc::new(PseudoGradient { dim: d, evaluator: evaluator.clone() }),
        }),
        _ => {
            let q = objective.to_quadratic().expect("non-opaque objective");
            let mut m = q.hessian();
            let mut c = q.h.clone();
            for i in d..2 * d {
                for j in 0..2 * d {
                    m[(i, j)] = -m[(i, j)];
                }
                c[i] = -c[i];
            }
            Operator::affine(m, c)
        }
    }
}

/// Embeds a `d`-dimensional piece into `2d` dimensions: the `z'` slot reads
/// the block starting at `first_at`, the `z` slot the block at `second_at`.
/// `None` places a part nowhere (used for the constant joint set).
fn embed(p: &BilinearPiece, d: usize, first_at: usize, second_at: Option<usize>, swap: bool) -> BilinearPiece {
    // `swap` puts the piece's own second argument in the z' slot.
    let (own_first, own_second) = if swap { (&p.b2, &p.b1) } else { (&p.b1, &p.b2) };
    let mut b1 = vec![0.0; 2 * d];
    let mut b2 = vec![0.0; 2 * d];
    b1[first_at..first_at + d].copy_from_slice(own_first);
    let b = match second_at {
        Some(at) => {
            b2[at..at + d].copy_from_slice(own_second);
            p.b.as_ref().filter(|b| !b.is_zero()).map(|b| {
                let blk = if swap { b.transpose() } else { b.clone() };
                let mut m = Matrix::zeros(2 * d, 2 * d);
                m.set_block(first_at, at, &blk);
                m
            })
        }
        None => None,
    };
    BilinearPiece { b, b1, b2, c: p.c }
}

/// QVI with operator `(∇x f, −∇y f)` and `Q_ν(x, y) = K₁^ν(y) × K₂^ν(x)`,
/// over `z = (x, y)` in `2d` dimensions.
pub fn minmax_to_qvi(inst: &MinMaxInstance) -> Result<QviInstance> {
    inst.validate()?;
    let d = inst.dim;
    let mut rows = Vec::new();
    for p in &inst.g1().pieces {
        // h(x', y): x' in the first block of z', y in the second block of z.
        rows.push(embed(p, d, 0, Some(d), false));
    }
    for p in &inst.g2().pieces {
        // h(x, y'): y' in the second block of z', x in the first block of z.
        rows.push(embed(p, d, d, Some(0), true));
    }
    let spec = CorrespondenceSpec::new(2 * d, rows, inst.nu)?;
    QviInstance::new(spec, pseudo_gradient_operator(&inst.objective)?, inst.eps)
}

/// VI over the joint set `K` of a jointly-convex instance, written as a QVI
/// with a constant correspondence.
pub fn jointly_convex_vi(inst: &MinMaxInstance) -> Result<QviInstance> {
    let Constraints::JointlyConvex { joint } = &inst.constraints else {
        return Err(Error::WrongConstraintKind);
    };
    let d = inst.dim;
    let rows = joint
        .pieces
        .iter()
        .map(|p| {
            let mut b1 = p.b1.clone();
            b1.extend_from_slice(&p.b2);
            BilinearPiece::linear(b1, vec![0.0; 2 * d], p.c)
        })
        .collect();
    let spec = CorrespondenceSpec::new(2 * d, rows, inst.nu)?;
    QviInstance::new(spec, pseudo_gradient_operator(&inst.objective)?, inst.eps)
}

/// One player of a generalized Nash problem.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GnepPlayer {
    /// Size of the player's own block.
    pub dim: usize,
    /// Utility `u_i(z)` over the full profile, to be maximised.
    pub utility: QuadraticForm,
    /// Rows `row(z, z'_i) ≤ ν` in full-profile coordinates. The first slot
    /// may only touch the player's own block, the second only the others.
    #[serde(default)]
    pub rows: Vec<BilinearPiece>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GnepSpec {
    pub players: Vec<GnepPlayer>,
    #[serde(default, deserialize_with = "crate::io::scalar")]
    pub nu: f64,
    #[serde(default, deserialize_with = "crate::io::scalar")]
    pub eps: f64,
}

impl GnepSpec {
    pub fn total_dim(&self) -> usize {
        self.players.iter().map(|p| p.dim).sum()
    }
}

fn touches_outside(v: &[f64], lo: usize, hi: usize) -> bool {
    v.iter().enumerate().any(|(k, x)| (k < lo || k >= hi) && *x != 0.0)
}

/// QVI with `F = (−∇₁u₁, …, −∇ₙuₙ)` and `Q_ν(z) = ⨉ Γ_i^ν(z_{−i})`.
/// Each utility must be concave in the player's own block.
pub fn gnep_to_qvi(spec: &GnepSpec) -> Result<QviInstance> {
    let d = spec.total_dim();
    let mut dmat = Matrix::zeros(d, d);
    let mut c = vec![0.0; d];
    let mut rows = Vec::new();
    let mut at = 0;
    for (i, p) in spec.players.iter().enumerate() {
        check_dim(d, p.utility.dim())?;
        let (lo, hi) = (at, at + p.dim);
        let hess = p.utility.hessian();
        let own = hess.block(lo, lo, p.dim, p.dim);
        if let Some(top) = own.symmetric_eigenvalues().last() {
            if *top > 1e-12 {
                return Err(Error::NotConvex(format!("utility of player {i} is not concave in its own block")));
            }
        }
        for r in lo..hi {
            for k in 0..d {
                dmat[(r, k)] = -hess[(r, k)];
            }
            c[r] = -p.utility.h[r];
        }
        for row in &p.rows {
            row.validate()?;
            check_dim(d, row.dim())?;
            let b_bad = row.b.as_ref().is_some_and(|b| {
                (0..d).any(|r| (0..d).any(|k| b[(r, k)] != 0.0 && (r < lo || r >= hi || (k >= lo && k < hi))))
            });
            let second_bad = row.b2.iter().enumerate().any(|(k, v)| *v != 0.0 && k >= lo && k < hi);
            if touches_outside(&row.b1, lo, hi) || second_bad || b_bad {
                return Err(Error::InvalidInstance(format!("row of player {i} mixes blocks")));
            }
            rows.push(row.clone());
        }
        at = hi;
    }
    let corr = CorrespondenceSpec::new(d, rows, spec.nu)?;
    QviInstance::new(corr, Operator::affine(dmat, c)?, spec.eps)
}
