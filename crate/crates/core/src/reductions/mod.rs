//! Instance transformations between polymatrix games, affine VIs, min-max
//! problems, QVIs and generalized Nash problems, with pull-back maps for
//! solutions.

mod gadgets;
mod polymatrix;
mod qvi;
mod soundness;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use gadgets::{linearvi_to_bilinear_minmax, linearvi_to_jc_minmax, minmax_solution_to_linearvi};
pub use polymatrix::{linearvi_solution_to_polymatrix, polymatrix_coefficients, polymatrix_to_linearvi};
pub use qvi::{gnep_to_qvi, jointly_convex_vi, minmax_to_qvi, GnepPlayer, GnepSpec};
pub use soundness::{run_pipeline, soundness_harness, PipelineOptions, PipelineReport};

use crate::error::Result;
use crate::gallery::{self, GalleryInstance};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProblemKind {
    Polymatrix,
    Linearvi,
    MinmaxJc,
    MinmaxBilinear,
    Minmax,
    Qvi,
    Gnep,
}

/// How a solution of the target maps back to the source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pullback {
    /// `z_i` is the probability of player `i`'s first action.
    MixedStrategy,
    /// The minimizer's point `x` solves the affine VI.
    MinimizerPoint,
    /// Solutions coincide.
    Identity,
}

/// Record of one transformation and the constants it used.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionTrace {
    pub source: ProblemKind,
    pub target: ProblemKind,
    pub constants: BTreeMap<String, f64>,
    pub pullback: Pullback,
}

impl ReductionTrace {
    fn new(source: ProblemKind, target: ProblemKind, pullback: Pullback, constants: &[(&str, f64)]) -> Self {
        ReductionTrace {
            source,
            target,
            pullback,
            constants: constants.iter().map(|(k, v)| (k.to_string(), *v)).collect(),
        }
    }

    pub fn constant(&self, key: &str) -> Option<f64> {
        self.constants.get(key).copied()
    }
}

/// Local-minimum instance whose certificate decides whether the graph has
/// an independent set of size `k`; see [`gallery::independent_set`].
pub fn independent_set_localmin_instance(d: usize, edges: &[[usize; 2]], k: f64) -> Result<GalleryInstance> {
    gallery::independent_set(d, edges, k)
}
