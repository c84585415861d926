use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{linearvi_solution_to_polymatrix, linearvi_to_bilinear_minmax, linearvi_to_jc_minmax};
use super::{minmax_solution_to_linearvi, polymatrix_to_linearvi, ReductionTrace};
use crate::error::Result;
use crate::gallery;
use crate::model::{Certificate, GadgetKind, PolymatrixGame};
use crate::verify::search_local_minmax;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PipelineOptions {
    pub gadget: GadgetKind,
    pub gamma: f64,
    /// Step of the `(x, y)` search grid.
    pub grid_step: f64,
    /// The δ-ball lattice uses step `δ / ball_divisions`.
    pub ball_divisions: f64,
    /// Added to `ε*` when judging the final regret.
    pub regret_slack: f64,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            gadget: GadgetKind::JointlyConvex,
            gamma: 1.0,
            grid_step: 1.0 / 200.0,
            ball_divisions: 8.0,
            regret_slack: 0.02,
        }
    }
}

/// Outcome of polymatrix → affine VI → gadget min-max → grid search →
/// pull-back → regret.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PipelineReport {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub options: PipelineOptions,
    pub traces: Vec<ReductionTrace>,
    /// First grid point passing the local min-max check, if any.
    pub minmax: Option<Certificate>,
    pub pullback: Option<Certificate>,
    pub regret: Option<Certificate>,
    /// `ε* + regret_slack`.
    pub tolerance: f64,
    pub passed: bool,
}

pub fn run_pipeline(game: &PolymatrixGame, opts: &PipelineOptions) -> Result<PipelineReport> {
    let (vi, t1) = polymatrix_to_linearvi(game)?;
    let (inst, t2) = match opts.gadget {
        GadgetKind::JointlyConvex => linearvi_to_jc_minmax(&vi, opts.gamma)?,
        GadgetKind::Bilinear => linearvi_to_bilinear_minmax(&vi, opts.gamma)?,
    };
    let tolerance = game.eps_star + opts.regret_slack;
    let minmax = search_local_minmax(&inst, opts.grid_step, inst.delta / opts.ball_divisions)?;
    let (pullback, regret) = match &minmax {
        Some(cert) => {
            let x = &cert.point[..inst.dim];
            (Some(minmax_solution_to_linearvi(&vi, x, &t2)?), Some(linearvi_solution_to_polymatrix(x, game)?))
        }
        None => (None, None),
    };
    let passed = regret.as_ref().is_some_and(|r| r.residual <= tolerance);
    Ok(PipelineReport { seed: None, options: *opts, traces: vec![t1, t2], minmax, pullback, regret, tolerance, passed })
}

/// Runs the pipeline on `random_polymatrix(n, seed)` for every seed, in
/// parallel, returning reports in seed order.
pub fn soundness_harness(n: usize, seeds: &[u64], opts: &PipelineOptions) -> Result<Vec<PipelineReport>> {
    seeds
        .par_iter()
        .map(|&seed| {
            let game = gallery::random_polymatrix(n, seed)?;
            let mut report = run_pipeline(&game, opts)?;
            report.seed = Some(seed);
            Ok(report)
        })
        .collect()
}
