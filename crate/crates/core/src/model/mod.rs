//! Problem instances and exact evaluation of objectives, gradients and
//! constraint functions.

mod certificate;
mod constraints;
mod instances;
mod objective;

pub use certificate::{Certificate, Method, Params, Sense};
pub use constraints::{feasible_set, BilinearPiece, ConstraintKind, ConstraintSet, Constraints, Player};
pub use instances::{
    eval_constraint, eval_objective, pseudo_gradient, CorrespondenceSpec, EdgePayoff, LinearVi,
    MinMaxInstance, Operator, PolymatrixGame, QviInstance, VectorField, DEFAULT_EPS_STAR,
};
pub use objective::{Evaluator, GadgetKind, GadgetObjective, Objective, QuadraticForm};
