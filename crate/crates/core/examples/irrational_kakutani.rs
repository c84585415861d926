//! A correspondence with polytope values whose only fixed point is
//! irrational, solved approximately with the Sperner solver and checked
//! under a relaxation.

use minmax_lab::gallery;
use minmax_lab::linalg;
use minmax_lab::polytope::feasibility;
use minmax_lab::sperner::{solve_qvi, SpernerOptions};
use minmax_lab::verify::verify_kakutani;
use minmax_lab::QviInstance;

fn main() -> minmax_lab::Result<()> {
    let spec = gallery::irrational_kakutani();
    let target = [std::f64::consts::FRAC_1_SQRT_2; 2];

    for z in [[0.5, 0.5], [0.8, 0.8], [0.4, 0.4]] {
        match feasibility(&spec.at(&z)) {
            Some(p) => println!("Q0({z:?}) contains {p:?}"),
            None => println!("Q0({z:?}) is empty"),
        }
    }

    let qvi = QviInstance::kakutani(spec.clone())?;
    let start = std::time::Instant::now();
    let run = solve_qvi(&qvi, &SpernerOptions::new(128, 1.0, 0.02))?;
    let v0 = run.certificate.point.clone();
    println!(
        "Sperner (grid 128, gamma 0.02): v0 = {v0:?}, distance to 1/sqrt(2) = {:.4}, relaxed vertices {}, {:.2?}",
        linalg::dist(&v0, &target),
        run.simplex.relaxed_vertices,
        start.elapsed()
    );

    for nu in [0.0, 0.01, 0.05] {
        let c = verify_kakutani(&spec.clone().with_nu(nu), &v0);
        println!("exact membership of v0 at nu = {nu}: passed={} worst row {:.3e}", c.passed, c.residual);
    }
    Ok(())
}
