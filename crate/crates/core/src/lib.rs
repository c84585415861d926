//! Constrained min-max optimization, variational inequalities and
//! quasi-variational inequalities on the unit hypercube.
//!
//! The crate is organised around a handful of instance types (see [`model`]),
//! exact and iterative optimisation over box-bounded polytopes
//! ([`polytope`]), projected descent-ascent dynamics ([`dynamics`]),
//! instance transformations with solution pull-backs ([`reductions`]), a
//! Sperner-based solver for quasi-variational inequalities ([`sperner`]),
//! certificate-producing verifiers ([`verify`]) and named instances
//! ([`gallery`]).
//!
//! Runnable walkthroughs live in `examples/`:
//!
//! ```text
//! cargo run --example eq_not_vi_separation
//! cargo run --example irrational_kakutani
//! cargo run --example nonexistence
//! cargo run --example polymatrix_pipeline
//! cargo run --example gadget_constants
//! cargo run --example gnep_shared_resource
//! cargo run --example extragradient_monotone
//! cargo run --example independent_set
//! cargo run --example parameter_formulas
//! ```
//!
//! The `minmax-lab` binary exposes the same functionality over JSON documents
//! (see `docs/schema.md`).

pub mod cli;
pub mod dynamics;
pub mod error;
pub mod gallery;
pub mod io;
pub mod linalg;
pub mod model;
pub mod polytope;
pub mod reductions;
pub mod sperner;
pub mod verify;

pub use error::{Error, Result};
pub use linalg::Matrix;
pub use model::{
    BilinearPiece, Certificate, ConstraintKind, ConstraintSet, Constraints, CorrespondenceSpec,
    LinearVi, MinMaxInstance, Objective, Operator, PolymatrixGame, QuadraticForm, QviInstance,
};
pub use polytope::BoxPolytope;
