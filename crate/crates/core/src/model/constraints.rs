use serde::{Deserialize, Serialize};

use crate::error::{check_dim, Error, Result};
use crate::linalg::{self, Matrix};
use crate::polytope::BoxPolytope;

/// `h(x, y) = xᵀ B y + b1ᵀ x + b2ᵀ y + c`; `B` absent means zero.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BilinearPiece {
    #[serde(rename = "B", default, skip_serializing_if = "Option::is_none")]
    pub b: Option<Matrix>,
    #[serde(deserialize_with = "crate::io::vector")]
    pub b1: Vec<f64>,
    #[serde(deserialize_with = "crate::io::vector")]
    pub b2: Vec<f64>,
    #[serde(deserialize_with = "crate::io::scalar")]
    pub c: f64,
}

impl BilinearPiece {
    pub fn linear(b1: Vec<f64>, b2: Vec<f64>, c: f64) -> Self {
        BilinearPiece { b: None, b1, b2, c }
    }

    pub fn bilinear(b: Matrix, b1: Vec<f64>, b2: Vec<f64>, c: f64) -> Self {
        BilinearPiece { b: Some(b), b1, b2, c }
    }

    /// Constant piece `c` in dimension `d`.
    pub fn constant(d: usize, c: f64) -> Self {
        BilinearPiece::linear(vec![0.0; d], vec![0.0; d], c)
    }

    pub fn dim(&self) -> usize {
        self.b1.len()
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.b1.len();
        check_dim(d, self.b2.len())?;
        if let Some(b) = &self.b {
            check_dim(d, b.rows())?;
            check_dim(d, b.cols())?;
        }
        Ok(())
    }

    pub fn has_bilinear_term(&self) -> bool {
        self.b.as_ref().is_some_and(|b| !b.is_zero())
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> f64 {
        let bl = self.b.as_ref().map_or(0.0, |b| b.bilinear(x, y));
        bl + linalg::dot(&self.b1, x) + linalg::dot(&self.b2, y) + self.c
    }

    /// Does the piece depend on `y`?
    pub fn depends_on_second(&self) -> bool {
        self.has_bilinear_term() || self.b2.iter().any(|v| *v != 0.0)
    }

    /// Does the piece depend on `x`?
    pub fn depends_on_first(&self) -> bool {
        self.has_bilinear_term() || self.b1.iter().any(|v| *v != 0.0)
    }

    /// Row `aᵀx ≤ β` in `x` obtained by fixing `y`, relaxed by `nu`.
    pub fn row_in_first(&self, y: &[f64], nu: f64) -> (Vec<f64>, f64) {
        let mut a = self.b1.clone();
        if let Some(b) = &self.b {
            a = linalg::add(&a, &b.mul_vec(y));
        }
        (a, nu - linalg::dot(&self.b2, y) - self.c)
    }

    /// Row `aᵀy ≤ β` in `y` obtained by fixing `x`, relaxed by `nu`.
    pub fn row_in_second(&self, x: &[f64], nu: f64) -> (Vec<f64>, f64) {
        let mut a = self.b2.clone();
        if let Some(b) = &self.b {
            a = linalg::add(&a, &b.tr_mul_vec(x));
        }
        (a, nu - linalg::dot(&self.b1, x) - self.c)
    }
}

/// Player whose variable is free.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Player {
    Min,
    Max,
}

/// `g(x, y) = max_j h_j(x, y)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ConstraintSet {
    pub pieces: Vec<BilinearPiece>,
}

impl ConstraintSet {
    pub fn new(pieces: Vec<BilinearPiece>) -> Result<Self> {
        if pieces.is_empty() {
            return Err(Error::EmptyConstraintSet);
        }
        let d = pieces[0].dim();
        for p in &pieces {
            p.validate()?;
            check_dim(d, p.dim())?;
        }
        Ok(ConstraintSet { pieces })
    }

    /// The sentinel `g ≡ −1`: no restriction beyond the box.
    pub fn unconstrained(d: usize) -> Self {
        ConstraintSet { pieces: vec![BilinearPiece::constant(d, -1.0)] }
    }

    /// `‖x − y‖∞ ≤ Δ` as the 2d pieces `±(x_i − y_i) − Δ`.
    pub fn inf_norm_ball(d: usize, delta: f64) -> Self {
        let mut pieces = Vec::with_capacity(2 * d);
        for i in 0..d {
            for s in [1.0, -1.0] {
                let mut b1 = vec![0.0; d];
                let mut b2 = vec![0.0; d];
                b1[i] = s;
                b2[i] = -s;
                pieces.push(BilinearPiece::linear(b1, b2, -delta));
            }
        }
        ConstraintSet { pieces }
    }

    pub fn dim(&self) -> usize {
        self.pieces.first().map_or(0, BilinearPiece::dim)
    }

    pub fn eval(&self, x: &[f64], y: &[f64]) -> Result<f64> {
        if self.pieces.is_empty() {
            return Err(Error::EmptyConstraintSet);
        }
        check_dim(self.dim(), x.len())?;
        check_dim(self.dim(), y.len())?;
        Ok(self.pieces.iter().map(|p| p.eval(x, y)).fold(f64::NEG_INFINITY, f64::max))
    }

    pub fn is_linear(&self) -> bool {
        self.pieces.iter().all(|p| !p.has_bilinear_term())
    }

    pub fn depends_on_first(&self) -> bool {
        self.pieces.iter().any(BilinearPiece::depends_on_first)
    }

    pub fn depends_on_second(&self) -> bool {
        self.pieces.iter().any(BilinearPiece::depends_on_second)
    }

    /// Feasible slice of the free player: `{v ∈ [0,1]^d : g(·) ≤ ν}` with
    /// the other player's variable fixed.
    pub fn slice(&self, fixed: &[f64], player: Player, nu: f64) -> BoxPolytope {
        let rows = self
            .pieces
            .iter()
            .map(|p| match player {
                Player::Min => p.row_in_first(fixed, nu),
                Player::Max => p.row_in_second(fixed, nu),
            })
            .collect();
        BoxPolytope::from_rows(self.dim(), rows)
    }

    /// The joint set `{(x, y) : g(x, y) ≤ ν}` as a polytope in dimension 2d.
    /// Only meaningful for linear sets.
    pub fn joint_polytope(&self, nu: f64) -> Result<BoxPolytope> {
        if !self.is_linear() {
            return Err(Error::WrongConstraintKind);
        }
        let rows = self.pieces.iter().map(|p| (linalg::concat(&p.b1, &p.b2), nu - p.c)).collect();
        Ok(BoxPolytope::from_rows(2 * self.dim(), rows))
    }
}

/// Slice of `gset` for the free `player` with the other variable fixed.
pub fn feasible_set(gset: &ConstraintSet, fixed: &[f64], player: Player, nu: f64) -> BoxPolytope {
    gset.slice(fixed, player, nu)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstraintKind {
    Product,
    JointlyConvex,
    Bilinear,
}

/// Constraint data of a min-max instance. A jointly-convex set is stored
/// once and sliced for each player.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Constraints {
    JointlyConvex { joint: ConstraintSet },
    Product { g1: ConstraintSet, g2: ConstraintSet },
    Bilinear { g1: ConstraintSet, g2: ConstraintSet },
}

impl Constraints {
    pub fn joint(set: ConstraintSet) -> Result<Self> {
        if !set.is_linear() {
            return Err(Error::InvalidInstance(
                "jointly-convex constraints cannot contain bilinear terms".into(),
            ));
        }
        Ok(Constraints::JointlyConvex { joint: set })
    }

    /// Per-player sets; classified as product when neither depends on the
    /// other player's variable.
    pub fn split(g1: ConstraintSet, g2: ConstraintSet) -> Result<Self> {
        check_dim(g1.dim(), g2.dim())?;
        if g1.depends_on_second() || g2.depends_on_first() {
            Ok(Constraints::Bilinear { g1, g2 })
        } else {
            Ok(Constraints::Product { g1, g2 })
        }
    }

    pub fn kind(&self) -> ConstraintKind {
        match self {
            Constraints::JointlyConvex { .. } => ConstraintKind::JointlyConvex,
            Constraints::Product { .. } => ConstraintKind::Product,
            Constraints::Bilinear { .. } => ConstraintKind::Bilinear,
        }
    }

    pub fn g1(&self) -> &ConstraintSet {
        match self {
            Constraints::JointlyConvex { joint } => joint,
            Constraints::Product { g1, .. } | Constraints::Bilinear { g1, .. } => g1,
        }
    }

    pub fn g2(&self) -> &ConstraintSet {
        match self {
            Constraints::JointlyConvex { joint } => joint,
            Constraints::Product { g2, .. } | Constraints::Bilinear { g2, .. } => g2,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for set in [self.g1(), self.g2()] {
            ConstraintSet::new(set.pieces.clone())?;
        }
        check_dim(self.g1().dim(), self.g2().dim())?;
        match self {
            Constraints::JointlyConvex { joint } if !joint.is_linear() => Err(Error::InvalidInstance(
                "jointly-convex constraints cannot contain bilinear terms".into(),
            )),
            Constraints::Product { g1, g2 } if g1.depends_on_second() || g2.depends_on_first() => {
                Err(Error::InvalidInstance("product constraints must not couple the players".into()))
            }
            _ => Ok(()),
        }
    }
}
