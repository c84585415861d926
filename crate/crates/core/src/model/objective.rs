use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, Matrix};

/// `q(z) = zᵀ M z + hᵀ z + k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadraticForm {
    #[serde(rename = "M")]
    pub m: Matrix,
    #[serde(deserialize_with = "crate::io::vector")]
    pub h: Vec<f64>,
    #[serde(deserialize_with = "crate::io::scalar")]
    pub k: f64,
}

impl QuadraticForm {
    pub fn new(m: Matrix, h: Vec<f64>, k: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::InvalidInstance("quadratic coefficient matrix must be square".into()));
        }
        check_dim(m.rows(), h.len())?;
        Ok(QuadraticForm { m, h, k })
    }

    pub fn zero(n: usize) -> Self {
        QuadraticForm { m: Matrix::zeros(n, n), h: vec![0.0; n], k: 0.0 }
    }

    pub fn dim(&self) -> usize {
        self.h.len()
    }

    pub fn value(&self, z: &[f64]) -> f64 {
        self.m.bilinear(z, z) + linalg::dot(&self.h, z) + self.k
    }

    /// `(M + Mᵀ) z + h`
    pub fn gradient(&self, z: &[f64]) -> Vec<f64> {
        let a = self.m.mul_vec(z);
        let b = self.m.tr_mul_vec(z);
        a.iter().zip(&b).zip(&self.h).map(|((p, q), h)| p + q + h).collect()
    }

    /// The constant Hessian `M + Mᵀ`.
    pub fn hessian(&self) -> Matrix {
        self.m.add(&self.m.transpose())
    }

    /// Smoothness constant: spectral norm of the Hessian.
    pub fn smoothness(&self) -> f64 {
        self.hessian().spectral_norm()
    }

    /// Maximum gradient norm over the unit box.
    pub fn gradient_bound(&self) -> f64 {
        linalg::max_affine_norm_on_box(&self.hessian(), &self.h)
    }
}

/// Imitation-gadget objectives in evaluator form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum GadgetKind {
    /// `f(x,y) = (x − y)ᵀ(Dx + c)`
    #[serde(rename = "gadget-jc")]
    JointlyConvex,
    /// `f(x,y) = xᵀ(Dy + c)`
    #[serde(rename = "gadget-bilinear")]
    Bilinear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GadgetObjective {
    #[serde(rename = "evaluator")]
    pub kind: GadgetKind,
    #[serde(rename = "D")]
    pub matrix: Matrix,
    #[serde(deserialize_with = "crate::io::vector")]
    pub c: Vec<f64>,
}

impl GadgetObjective {
    pub fn new(kind: GadgetKind, matrix: Matrix, c: Vec<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidInstance("gadget matrix must be square".into()));
        }
        check_dim(matrix.rows(), c.len())?;
        Ok(GadgetObjective { kind, matrix, c })
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn value(&self, x: &[f64], y: &[f64]) -> f64 {
        match self.kind {
            GadgetKind::JointlyConvex => {
                let t = linalg::add(&self.matrix.mul_vec(x), &self.c);
                linalg::dot(&linalg::sub(x, y), &t)
            }
            GadgetKind::Bilinear => {
                let t = linalg::add(&self.matrix.mul_vec(y), &self.c);
                linalg::dot(x, &t)
            }
        }
    }

    pub fn gradient(&self, x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
        match self.kind {
            GadgetKind::JointlyConvex => {
                let t = linalg::add(&self.matrix.mul_vec(x), &self.c);
                let gx = linalg::add(&t, &self.matrix.tr_mul_vec(&linalg::sub(x, y)));
                let gy = linalg::scale(&t, -1.0);
                (gx, gy)
            }
            GadgetKind::Bilinear => {
                let gx = linalg::add(&self.matrix.mul_vec(y), &self.c);
                let gy = self.matrix.tr_mul_vec(x);
                (gx, gy)
            }
        }
    }

    /// The same function as a quadratic form over `z = (x, y)`.
    pub fn to_quadratic(&self) -> QuadraticForm {
        let d = self.dim();
        let mut m = Matrix::zeros(2 * d, 2 * d);
        let mut h = vec![0.0; 2 * d];
        match self.kind {
            GadgetKind::JointlyConvex => {
                // xᵀDx − yᵀDx + cᵀx − cᵀy
                m.set_block(0, 0, &self.matrix);
                m.set_block(d, 0, &self.matrix.scaled(-1.0));
                for i in 0..d {
                    h[i] = self.c[i];
                    h[d + i] = -self.c[i];
                }
            }
            GadgetKind::Bilinear => {
                m.set_block(0, d, &self.matrix);
                h[..d].copy_from_slice(&self.c);
            }
        }
        QuadraticForm { m, h, k: 0.0 }
    }
}

/// Objective supplied as code.
pub trait Evaluator: Send + Sync {
    fn value(&self, x: &[f64], y: &[f64]) -> f64;
    fn gradient(&self, x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>);
}

#[derive(Clone)]
pub enum Objective {
    /// Quadratic over the stacked variable `z = (x, y)`.
    Quadratic(QuadraticForm),
    Gadget(GadgetObjective),
    /// Opaque evaluator of the given per-player dimension.
    Opaque { dim: usize, evaluator: Arc<dyn Evaluator> },
}

impl fmt::Debug for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Objective::Quadratic(q) => f.debug_tuple("Quadratic").field(q).finish(),
            Objective::Gadget(g) => f.debug_tuple("Gadget").field(g).finish(),
            Objective::Opaque { dim, .. } => f.debug_struct("Opaque").field("dim", dim).finish(),
        }
    }
}

impl Objective {
    pub fn quadratic(m: Matrix, h: Vec<f64>, k: f64) -> Result<Self> {
        let q = QuadraticForm::new(m, h, k)?;
        if q.dim() % 2 != 0 {
            return Err(Error::InvalidInstance("quadratic objective needs an even dimension".into()));
        }
        Ok(Objective::Quadratic(q))
    }

    pub fn zero(d: usize) -> Self {
        Objective::Quadratic(QuadraticForm::zero(2 * d))
    }

    pub fn opaque(dim: usize, evaluator: impl Evaluator + 'static) -> Self {
        Objective::Opaque { dim, evaluator: Arc::new(evaluator) }
    }

    /// Per-player dimension.
    pub fn dim(&self) -> usize {
        match self {
            Objective::Quadratic(q) => q.dim() / 2,
            Objective::Gadget(g) => g.dim(),
            Objective::Opaque { dim, .. } => *dim,
        }
    }

    pub fn value(&self, x: &[f64], y: &[f64]) -> f64 {
        match self {
            Objective::Quadratic(q) => q.value(&linalg::concat(x, y)),
            Objective::Gadget(g) => g.value(x, y),
            Objective::Opaque { evaluator, .. } => evaluator.value(x, y),
        }
    }

    pub fn gradient(&self, x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
        match self {
            Objective::Quadratic(q) => {
                let mut g = q.gradient(&linalg::concat(x, y));
                let gy = g.split_off(x.len());
                (g, gy)
            }
            Objective::Gadget(g) => g.gradient(x, y),
            Objective::Opaque { evaluator, .. } => evaluator.gradient(x, y),
        }
    }

    /// `(∇x f, −∇y f)` stacked.
    pub fn pseudo_gradient(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        let (gx, gy) = self.gradient(x, y);
        let mut out = gx;
        out.extend(gy.iter().map(|v| -v));
        out
    }

    pub fn to_quadratic(&self) -> Option<QuadraticForm> {
        match self {
            Objective::Quadratic(q) => Some(q.clone()),
            Objective::Gadget(g) => Some(g.to_quadratic()),
            Objective::Opaque { .. } => None,
        }
    }

    /// Hessian block of the minimizing player, if the objective is quadratic.
    pub fn x_hessian(&self) -> Option<Matrix> {
        let d = self.dim();
        self.to_quadratic().map(|q| q.hessian().block(0, 0, d, d))
    }

    /// True when the objective is affine in `x` for every fixed `y`.
    pub fn is_linear_in_x(&self) -> bool {
        self.x_hessian().is_some_and(|h| h.is_zero())
    }

    /// Gradient-norm and smoothness bounds computed from the quadratic
    /// form; `None` for opaque evaluators.
    pub fn computed_bounds(&self) -> Option<(f64, f64)> {
        self.to_quadratic().map(|q| (q.gradient_bound(), q.smoothness()))
    }
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum ObjectiveDoc {
    Gadget(GadgetObjective),
    Quadratic(QuadraticForm),
}

impl Serialize for Objective {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Objective::Quadratic(q) => q.serialize(s),
            Objective::Gadget(g) => g.serialize(s),
            Objective::Opaque { .. } => {
                Err(serde::ser::Error::custom("opaque evaluators cannot be serialized"))
            }
        }
    }
}

impl<'de> Deserialize<'de> for Objective {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        match ObjectiveDoc::deserialize(d)? {
            ObjectiveDoc::Gadget(g) => {
                GadgetObjective::new(g.kind, g.matrix, g.c).map(Objective::Gadget).map_err(D::Error::custom)
            }
            ObjectiveDoc::Quadratic(q) => {
                Objective::quadratic(q.m, q.h, q.k).map_err(D::Error::custom)
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn jc(d: Vec<Vec<f64>>, c: Vec<f64>) -> GadgetObjective {
        GadgetObjective::new(GadgetKind::JointlyConvex, Matrix::from_rows(d).unwrap(), c).unwrap()
    }

    #[test]
    fn jc_gadget_value_by_hand() {
        let g = jc(vec![vec![0.0]], vec![-1.0]);
        assert!((g.value(&[0.5], &[0.2]) + 0.3).abs() < 1e-15);
    }

    #[test]
    fn jc_gadget_pseudo_gradient() {
        let o = Objective::Gadget(jc(vec![vec![1.0]], vec![0.0]));
        assert_eq!(o.pseudo_gradient(&[0.5], &[0.5]), vec![0.5, 0.5]);
    }

    #[test]
    fn quadratic_expansion_matches_gadget() {
        let g = jc(vec![vec![0.3, -0.2], vec![0.1, 0.4]], vec![0.5, -0.25]);
        let q = g.to_quadratic();
        for (x, y) in [([0.1, 0.9], [0.4, 0.2]), ([1.0, 0.0], [0.0, 1.0])] {
            let z = linalg::concat(&x, &y);
            assert!((q.value(&z) - g.value(&x, &y)).abs() < 1e-14);
            let (gx, gy) = g.gradient(&x, &y);
            let gz = q.gradient(&z);
            assert!(linalg::dist(&gz, &linalg::concat(&gx, &gy)) < 1e-14);
        }
    }

    #[test]
    fn zero_objective_is_flat() {
        let o = Objective::zero(2);
        assert_eq!(o.value(&[0.3, 0.1], &[0.9, 0.2]), 0.0);
        assert_eq!(o.pseudo_gradient(&[0.3, 0.1], &[0.9, 0.2]), vec![0.0; 4]);
    }
}
