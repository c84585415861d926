//! A constrained min-max instance with a single feasible point. The exact
//! check at that point and the QVI relaxation solved by the Sperner solver.

use minmax_lab::gallery;
use minmax_lab::reductions::minmax_to_qvi;
use minmax_lab::sperner::{solve_qvi, SpernerOptions};
use minmax_lab::verify::{single_component_gain, verify_local_minmax};

fn main() -> minmax_lab::Result<()> {
    let eps = 0.1;
    let g = gallery::nonexistence_instance(eps);
    let inst = &g.instance;
    println!("eps = {eps}, delta = {}, nu = {}", inst.delta, inst.nu);
    for (x, y) in [(0.0, 0.0), (0.5, 0.0), (0.0, 0.5), (0.3, 0.3)] {
        let (g1, g2) = inst.constraint_values(&[x], &[y])?;
        println!("  (x, y) = ({x}, {y}): g1 = {g1:+.2}, g2 = {g2:+.2}");
    }

    let cert = verify_local_minmax(inst, &[0.0], &[0.0], inst.delta / 64.0)?;
    println!("exact check at (0, 0): passed={} residual={:.3e}", cert.passed, cert.residual);
    println!("single-coordinate gain − eps: {:?}", single_component_gain(inst, &[0.0], &[0.0])?);
    println!(
        "minimizer gain from x' = delta: linear reading {:.4}, exact objective {:.4} (eps {eps})",
        g.claims["linear_reading_gain"], g.claims["exact_gain"]
    );

    let relaxed = inst.clone().with_params(eps, inst.delta, 0.1)?;
    let qvi = minmax_to_qvi(&relaxed)?;
    let run = solve_qvi(&qvi, &SpernerOptions::new(64, 1.0, 0.05))?;
    println!(
        "QVI at nu = 0.1: v0 = {:?}, passed={} residual={:.4e} threshold={:.1e}",
        run.certificate.point, run.certificate.passed, run.certificate.residual, run.certificate.threshold
    );
    Ok(())
}
