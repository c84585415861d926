//! Two players share a budget `x₁ + x₂ ≤ 1` and each wants to sit at its
//! own target. The generalized Nash problem becomes a QVI solved by the
//! Sperner solver.

use minmax_lab::model::{BilinearPiece, QuadraticForm};
use minmax_lab::reductions::{gnep_to_qvi, GnepPlayer, GnepSpec};
use minmax_lab::sperner::{solve_qvi, SpernerOptions};
use minmax_lab::Matrix;

fn player(own: usize, target: f64) -> minmax_lab::Result<GnepPlayer> {
    let mut m = Matrix::zeros(2, 2);
    m[(own, own)] = -1.0;
    let mut h = vec![0.0; 2];
    h[own] = 2.0 * target;
    let (mut b1, mut b2) = (vec![0.0; 2], vec![0.0; 2]);
    b1[own] = 1.0;
    b2[1 - own] = 1.0;
    Ok(GnepPlayer {
        dim: 1,
        utility: QuadraticForm::new(m, h, -target * target)?,
        rows: vec![BilinearPiece::linear(b1, b2, -1.0)],
    })
}

fn main() -> minmax_lab::Result<()> {
    let spec = GnepSpec { players: vec![player(0, 0.8)?, player(1, 0.6)?], nu: 0.0, eps: 0.02 };
    let qvi = gnep_to_qvi(&spec)?;
    let run = solve_qvi(&qvi, &SpernerOptions::new(100, 1.0, 0.01))?;
    let z = &run.certificate.point;
    println!("profile {z:?}, budget use {:.3}", z[0] + z[1]);
    println!("passed={} residual={:.4e} threshold={:.1e}", run.certificate.passed, run.certificate.residual, run.certificate.threshold);
    for (k, v) in &run.certificate.details {
        println!("  {k}: {v:.4e}");
    }
    Ok(())
}
