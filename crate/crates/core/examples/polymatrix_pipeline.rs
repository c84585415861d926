//! Two-action polymatrix game → affine VI → gadget min-max instance → grid
//! search → pull-back to a mixed strategy profile.

use minmax_lab::dynamics::{extragradient_vi, ExtragradientOptions};
use minmax_lab::gallery;
use minmax_lab::model::GadgetKind;
use minmax_lab::reductions::{
    linearvi_solution_to_polymatrix, polymatrix_to_linearvi, run_pipeline, soundness_harness, PipelineOptions,
};

fn main() -> minmax_lab::Result<()> {
    let game = gallery::matching_pennies();
    let (vi, trace) = polymatrix_to_linearvi(&game)?;
    println!("matching pennies: D = {:?}, c = {:?}, rho = {}", vi.matrix.to_rows(), vi.c, trace.constant("rho_star").unwrap_or(f64::NAN));

    let eg = extragradient_vi(&vi.matrix, &vi.c, &ExtragradientOptions::default())?;
    let regret = linearvi_solution_to_polymatrix(&eg.point, &game)?;
    println!("extragradient: z = {:?}, regret {:.3e}", eg.point, regret.residual);

    for gadget in [GadgetKind::JointlyConvex, GadgetKind::Bilinear] {
        let opts = PipelineOptions { gadget, ..PipelineOptions::default() };
        let report = run_pipeline(&game, &opts)?;
        let point = report.regret.as_ref().map(|c| c.point.clone());
        println!("{gadget:?} gadget on matching pennies: passed={} point={point:?}", report.passed);
    }

    let seeds: Vec<u64> = (0..5).collect();
    let reports = soundness_harness(2, &seeds, &PipelineOptions::default())?;
    for r in &reports {
        let regret = r.regret.as_ref().map_or(f64::NAN, |c| c.residual);
        println!("seed {:?}: regret {regret:.4} (tolerance {:.3}) passed={}", r.seed, r.tolerance, r.passed);
    }
    Ok(())
}
