use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::constraints::{BilinearPiece, ConstraintKind, ConstraintSet, Constraints, Player};
use super::objective::Objective;
use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, Matrix};
use crate::polytope::BoxPolytope;

/// Affine variational inequality `z ↦ Dz + c` over `[0,1]^d`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearVi {
    #[serde(rename = "D")]
    pub matrix: Matrix,
    #[serde(deserialize_with = "crate::io::vector")]
    pub c: Vec<f64>,
    #[serde(deserialize_with = "crate::io::scalar")]
    pub rho: f64,
    #[serde(default)]
    pub norm_certified: bool,
}

impl LinearVi {
    /// Builds the instance; `norm_certified` is set when both induced
    /// norms are at most one.
    pub fn new(matrix: Matrix, c: Vec<f64>, rho: f64) -> Result<Self> {
        let mut vi = LinearVi { matrix, c, rho, norm_certified: false };
        vi.norm_certified = vi.norms_within_unit();
        vi.validate()?;
        Ok(vi)
    }

    pub fn dim(&self) -> usize {
        self.c.len()
    }

    pub fn norms_within_unit(&self) -> bool {
        self.matrix.norm_1() <= 1.0 && self.matrix.norm_inf() <= 1.0
    }

    pub fn validate(&self) -> Result<()> {
        if !self.matrix.is_square() {
            return Err(Error::InvalidInstance("D must be square".into()));
        }
        check_dim(self.matrix.rows(), self.c.len())?;
        if self.matrix.entries().iter().chain(&self.c).any(|v| !(-1.0..=1.0).contains(v)) {
            return Err(Error::InvalidInstance("entries of D and c must lie in [-1, 1]".into()));
        }
        if !(self.rho > 0.0 && self.rho.is_finite()) {
            return Err(Error::InvalidInstance("rho must be positive".into()));
        }
        if self.norm_certified && !self.norms_within_unit() {
            return Err(Error::InvalidInstance("norm certification flag set but ‖D‖ > 1".into()));
        }
        Ok(())
    }

    pub fn operator(&self, z: &[f64]) -> Vec<f64> {
        linalg::add(&self.matrix.mul_vec(z), &self.c)
    }

    pub fn is_monotone(&self) -> bool {
        self.matrix.symmetric_eigenvalues().first().is_none_or(|e| *e >= -1e-12)
    }
}

/// Constrained min-max instance over `[0,1]^d × [0,1]^d`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MinMaxInstance {
    pub dim: usize,
    pub objective: Objective,
    pub constraints: Constraints,
    #[serde(deserialize_with = "crate::io::scalar")]
    pub eps: f64,
    #[serde(deserialize_with = "crate::io::scalar")]
    pub delta: f64,
    #[serde(deserialize_with = "crate::io::scalar")]
    pub nu: f64,
    /// Declared gradient-norm bound `G`; computed on load when omitted.
    #[serde(default = "undeclared", deserialize_with = "crate::io::scalar")]
    pub lipschitz: f64,
    /// Declared smoothness bound `L`; computed on load when omitted.
    #[serde(default = "undeclared", deserialize_with = "crate::io::scalar")]
    pub smoothness: f64,
    /// Asserts `δ < √(2ε/L)`.
    #[serde(default)]
    pub local_regime: bool,
}

impl MinMaxInstance {
    /// Bounds are computed from the objective when it is quadratic; opaque
    /// objectives must declare them with [`MinMaxInstance::with_bounds`].
    pub fn new(objective: Objective, constraints: Constraints, eps: f64, delta: f64, nu: f64) -> Result<Self> {
        let (lipschitz, smoothness) = objective.computed_bounds().unwrap_or((f64::NAN, f64::NAN));
        let inst = MinMaxInstance {
            dim: objective.dim(),
            objective,
            constraints,
            eps,
            delta,
            nu,
            lipschitz,
            smoothness,
            local_regime: false,
        };
        if inst.lipschitz.is_finite() {
            inst.validate()?;
        }
        Ok(inst)
    }

    /// Replaces bounds left undeclared in a document with computed ones.
    pub fn fill_bounds(&mut self) {
        if let Some((g, l)) = self.objective.computed_bounds() {
            if self.lipschitz.is_nan() {
                self.lipschitz = g;
            }
            if self.smoothness.is_nan() {
                self.smoothness = l;
            }
        }
    }

    pub fn with_bounds(mut self, lipschitz: f64, smoothness: f64) -> Result<Self> {
        self.lipschitz = lipschitz;
        self.smoothness = smoothness;
        self.validate()?;
        Ok(self)
    }

    pub fn with_params(mut self, eps: f64, delta: f64, nu: f64) -> Result<Self> {
        self.eps = eps;
        self.delta = delta;
        self.nu = nu;
        self.validate()?;
        Ok(self)
    }

    /// Flags the instance as being in the local regime, checking the bound.
    pub fn in_local_regime(mut self) -> Result<Self> {
        self.local_regime = true;
        self.validate()?;
        Ok(self)
    }

    pub fn satisfies_local_regime(&self) -> bool {
        self.smoothness <= 0.0 || self.delta < (2.0 * self.eps / self.smoothness).sqrt()
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.dim, self.objective.dim())?;
        self.constraints.validate()?;
        check_dim(self.dim, self.constraints.g1().dim())?;
        for (name, v) in [
            ("eps", self.eps),
            ("delta", self.delta),
            ("nu", self.nu),
            ("lipschitz", self.lipschitz),
            ("smoothness", self.smoothness),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(Error::InvalidInstance(format!("{name} must be finite and non-negative")));
            }
        }
        if self.local_regime && !self.satisfies_local_regime() {
            return Err(Error::InvalidInstance(format!(
                "local regime requires delta < sqrt(2 eps / L): {} >= {}",
                self.delta,
                (2.0 * self.eps / self.smoothness).sqrt()
            )));
        }
        Ok(())
    }

    pub fn kind(&self) -> ConstraintKind {
        self.constraints.kind()
    }

    pub fn g1(&self) -> &ConstraintSet {
        self.constraints.g1()
    }

    pub fn g2(&self) -> &ConstraintSet {
        self.constraints.g2()
    }

    pub fn value(&self, x: &[f64], y: &[f64]) -> f64 {
        self.objective.value(x, y)
    }

    pub fn gradient(&self, x: &[f64], y: &[f64]) -> (Vec<f64>, Vec<f64>) {
        self.objective.gradient(x, y)
    }

    pub fn pseudo_gradient(&self, x: &[f64], y: &[f64]) -> Vec<f64> {
        self.objective.pseudo_gradient(x, y)
    }

    /// `K₁^ν(y)`.
    pub fn slice_min(&self, y: &[f64]) -> BoxPolytope {
        self.g1().slice(y, Player::Min, self.nu)
    }

    /// `K₂^ν(x)`.
    pub fn slice_max(&self, x: &[f64]) -> BoxPolytope {
        self.g2().slice(x, Player::Max, self.nu)
    }

    /// The joint set `K` (2d-dimensional) of a jointly-convex instance.
    pub fn joint_set(&self) -> Result<BoxPolytope> {
        match &self.constraints {
            Constraints::JointlyConvex { joint } => joint.joint_polytope(self.nu),
            _ => Err(Error::WrongConstraintKind),
        }
    }

    pub fn constraint_values(&self, x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
        Ok((self.g1().eval(x, y)?, self.g2().eval(x, y)?))
    }

    pub fn check_dims(&self, x: &[f64], y: &[f64]) -> Result<()> {
        check_dim(self.dim, x.len())?;
        check_dim(self.dim, y.len())
    }
}

/// `f(x, y)`.
pub fn eval_objective(inst: &MinMaxInstance, x: &[f64], y: &[f64]) -> Result<f64> {
    inst.check_dims(x, y)?;
    Ok(inst.value(x, y))
}

/// `(∇x f, −∇y f)`.
pub fn pseudo_gradient(inst: &MinMaxInstance, x: &[f64], y: &[f64]) -> Result<Vec<f64>> {
    inst.check_dims(x, y)?;
    Ok(inst.pseudo_gradient(x, y))
}

/// `max_j h_j(x, y)`.
pub fn eval_constraint(gset: &ConstraintSet, x: &[f64], y: &[f64]) -> Result<f64> {
    gset.eval(x, y)
}

/// Parametric polytope `Q_ν(z) = {z' ∈ [0,1]^d : row_j(z, z') ≤ ν}` with
/// `row_j(z, z') = z'ᵀ B_j z + b1_jᵀ z' + b2_jᵀ z + c_j`.
///
/// Rows reuse [`BilinearPiece`] with `z'` in the first slot and `z` in the
/// second.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorrespondenceSpec {
    pub dim: usize,
    pub rows: Vec<BilinearPiece>,
    #[serde(default, deserialize_with = "crate::io::scalar")]
    pub nu: f64,
}

impl CorrespondenceSpec {
    pub fn new(dim: usize, rows: Vec<BilinearPiece>, nu: f64) -> Result<Self> {
        let spec = CorrespondenceSpec { dim, rows, nu };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        for r in &self.rows {
            r.validate()?;
            check_dim(self.dim, r.dim())?;
        }
        if !(self.nu >= 0.0 && self.nu.is_finite()) {
            return Err(Error::InvalidInstance("nu must be finite and non-negative".into()));
        }
        Ok(())
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.nu = nu;
        self
    }

    /// `Q_nu(z)` for an explicit relaxation.
    pub fn polytope(&self, z: &[f64], nu: f64) -> BoxPolytope {
        let rows = self.rows.iter().map(|r| r.row_in_first(z, nu)).collect();
        BoxPolytope::from_rows(self.dim, rows)
    }

    /// `Q_ν(z)` at the correspondence's own relaxation.
    pub fn at(&self, z: &[f64]) -> BoxPolytope {
        self.polytope(z, self.nu)
    }

    pub fn row_values(&self, z: &[f64], zp: &[f64]) -> Vec<f64> {
        self.rows.iter().map(|r| r.eval(zp, z)).collect()
    }

    /// `max_j row_j(z, z)` (−∞ without rows).
    pub fn self_violation(&self, z: &[f64]) -> f64 {
        self.row_values(z, z).into_iter().fold(f64::NEG_INFINITY, f64::max)
    }

    /// Lipschitz constant of `z ↦ A(z)z'` (uniformly in `z' ∈ [0,1]^d`) and
    /// of `z ↦ b(z)`, row by row.
    pub fn lipschitz_bound(&self) -> f64 {
        self.rows
            .iter()
            .map(|r| {
                let a = r
                    .b
                    .as_ref()
                    .map_or(0.0, |b| linalg::max_affine_norm_on_box(&b.transpose(), &vec![0.0; self.dim]));
                a.max(linalg::norm(&r.b2))
            })
            .fold(0.0, f64::max)
    }
}

/// Vector field supplied as code.
pub trait VectorField: Send + Sync {
    fn eval(&self, z: &[f64]) -> Vec<f64>;
}

#[derive(Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Operator {
    Affine {
        #[serde(rename = "D")]
        matrix: Matrix,
        #[serde(deserialize_with = "crate::io::vector")]
        c: Vec<f64>,
    },
    #[serde(skip)]
    Opaque { dim: usize, field: Arc<dyn VectorField> },
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operator::Affine { matrix, c } => {
                f.debug_struct("Affine").field("matrix", matrix).field("c", c).finish()
            }
            Operator::Opaque { dim, .. } => f.debug_struct("Opaque").field("dim", dim).finish(),
        }
    }
}

impl Operator {
    pub fn zero(d: usize) -> Self {
        Operator::Affine { matrix: Matrix::zeros(d, d), c: vec![0.0; d] }
    }

    pub fn affine(matrix: Matrix, c: Vec<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidInstance("operator matrix must be square".into()));
        }
        check_dim(matrix.rows(), c.len())?;
        Ok(Operator::Affine { matrix, c })
    }

    pub fn dim(&self) -> usize {
        match self {
            Operator::Affine { c, .. } => c.len(),
            Operator::Opaque { dim, .. } => *dim,
        }
    }

    pub fn eval(&self, z: &[f64]) -> Vec<f64> {
        match self {
            Operator::Affine { matrix, c } => linalg::add(&matrix.mul_vec(z), c),
            Operator::Opaque { field, .. } => field.eval(z),
        }
    }

    /// `max ‖F(z)‖` over the box for affine operators.
    pub fn computed_bound(&self) -> Option<f64> {
        match self {
            Operator::Affine { matrix, c } => Some(linalg::max_affine_norm_on_box(matrix, c)),
            Operator::Opaque { .. } => None,
        }
    }
}

/// Quasi-variational inequality: find `z ∈ Q_ν(z)` with
/// `F(z)ᵀ(z' − z) ≥ −ε` for all `z' ∈ Q_ν(z)`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct QviInstance {
    pub correspondence: CorrespondenceSpec,
    pub operator: Operator,
    #[serde(deserialize_with = "crate::io::scalar")]
    pub eps: f64,
    /// Lipschitz bound `L` of `A(·)` and `b(·)`.
    #[serde(default = "undeclared", deserialize_with = "crate::io::scalar")]
    pub lipschitz: f64,
    /// Bound `G` on `‖F‖` over the box.
    #[serde(default = "undeclared", deserialize_with = "crate::io::scalar")]
    pub operator_bound: f64,
}

impl QviInstance {
    /// Bounds are computed from the data (opaque operators get `G = ∞`
    /// until declared).
    pub fn new(correspondence: CorrespondenceSpec, operator: Operator, eps: f64) -> Result<Self> {
        let inst = QviInstance {
            lipschitz: correspondence.lipschitz_bound(),
            operator_bound: operator.computed_bound().unwrap_or(f64::INFINITY),
            correspondence,
            operator,
            eps,
        };
        inst.validate()?;
        Ok(inst)
    }

    /// Kakutani problem: the zero operator.
    pub fn kakutani(correspondence: CorrespondenceSpec) -> Result<Self> {
        let d = correspondence.dim;
        QviInstance::new(correspondence, Operator::zero(d), 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        self.correspondence.validate()?;
        check_dim(self.correspondence.dim, self.operator.dim())?;
        if !(self.eps >= 0.0) {
            return Err(Error::InvalidInstance("eps must be non-negative".into()));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.correspondence.dim
    }

    pub fn nu(&self) -> f64 {
        self.correspondence.nu
    }

    /// Replaces bounds left undeclared in a document with computed ones.
    pub fn fill_bounds(&mut self) {
        if self.lipschitz.is_nan() {
            self.lipschitz = self.correspondence.lipschitz_bound();
        }
        if self.operator_bound.is_nan() {
            self.operator_bound = self.operator.computed_bound().unwrap_or(f64::INFINITY);
        }
    }

    pub fn with_nu(mut self, nu: f64) -> Self {
        self.correspondence.nu = nu;
        self
    }

    pub fn with_eps(mut self, eps: f64) -> Self {
        self.eps = eps;
        self
    }

    pub fn operator_at(&self, z: &[f64]) -> Vec<f64> {
        self.operator.eval(z)
    }
}

/// 2×2 payoff of `from` against `to`: rows index `from`'s action, columns
/// `to`'s action, action 0 being the one played with probability `z`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EdgePayoff {
    pub from: usize,
    pub to: usize,
    pub matrix: Matrix,
}

/// Two-action polymatrix game.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolymatrixGame {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
    pub payoffs: Vec<EdgePayoff>,
    #[serde(default = "default_eps_star", deserialize_with = "crate::io::scalar")]
    pub eps_star: f64,
    #[serde(default)]
    pub degree_bounded: bool,
}

pub const DEFAULT_EPS_STAR: f64 = 0.088;

fn undeclared() -> f64 {
    f64::NAN
}

fn default_eps_star() -> f64 {
    DEFAULT_EPS_STAR
}

impl PolymatrixGame {
    pub fn new(n: usize, edges: Vec<[usize; 2]>, payoffs: Vec<EdgePayoff>, eps_star: f64) -> Result<Self> {
        let mut g = PolymatrixGame { n, edges, payoffs, eps_star, degree_bounded: false };
        g.validate()?;
        g.degree_bounded = g.max_degree() <= 3;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        let mut seen = std::collections::BTreeSet::new();
        for &[i, j] in &self.edges {
            if i >= self.n || j >= self.n || i == j {
                return Err(Error::InvalidInstance(format!("bad edge ({i}, {j})")));
            }
            if !seen.insert((i.min(j), i.max(j))) {
                return Err(Error::InvalidInstance(format!("duplicate edge ({i}, {j})")));
            }
        }
        let mut directed = std::collections::BTreeSet::new();
        for p in &self.payoffs {
            if p.matrix.rows() != 2 || p.matrix.cols() != 2 {
                return Err(Error::InvalidInstance("only two actions per player are supported".into()));
            }
            if p.matrix.entries().iter().any(|v| !(0.0..=1.0).contains(v)) {
                return Err(Error::InvalidInstance("payoff entries must lie in [0, 1]".into()));
            }
            if !seen.contains(&(p.from.min(p.to), p.from.max(p.to))) {
                return Err(Error::InvalidInstance(format!("payoff on non-edge ({}, {})", p.from, p.to)));
            }
            if !directed.insert((p.from, p.to)) {
                return Err(Error::InvalidInstance(format!("duplicate payoff ({}, {})", p.from, p.to)));
            }
        }
        if directed.len() != 2 * seen.len() {
            return Err(Error::InvalidInstance("every edge needs a payoff in both directions".into()));
        }
        if self.degree_bounded && self.max_degree() > 3 {
            return Err(Error::InvalidInstance("degree-bounded flag set but a degree exceeds 3".into()));
        }
        if !(self.eps_star > 0.0) {
            return Err(Error::InvalidInstance("eps_star must be positive".into()));
        }
        Ok(())
    }

    pub fn degree(&self, i: usize) -> usize {
        self.edges.iter().filter(|e| e[0] == i || e[1] == i).count()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|i| self.degree(i)).max().unwrap_or(0)
    }

    pub fn payoff(&self, from: usize, to: usize) -> Option<&Matrix> {
        self.payoffs.iter().find(|p| p.from == from && p.to == to).map(|p| &p.matrix)
    }

    /// Payoffs of player `i`, one per neighbour.
    pub fn outgoing(&self, i: usize) -> impl Iterator<Item = &EdgePayoff> {
        self.payoffs.iter().filter(move |p| p.from == i)
    }

    /// Expected utility of player `i` when it plays `xi` and the others
    /// follow `z`.
    pub fn utility_with(&self, i: usize, xi: f64, z: &[f64]) -> f64 {
        self.outgoing(i)
            .map(|p| {
                let xj = z[p.to];
                let m = &p.matrix;
                xi * xj * m[(0, 0)]
                    + xi * (1.0 - xj) * m[(0, 1)]
                    + (1.0 - xi) * xj * m[(1, 0)]
                    + (1.0 - xi) * (1.0 - xj) * m[(1, 1)]
            })
            .sum()
    }

    pub fn utility(&self, i: usize, z: &[f64]) -> f64 {
        self.utility_with(i, z[i], z)
    }
}
