//! Extragradient on random monotone affine VIs over the unit box, with the
//! solution checked by the closed-form box verifier.

use minmax_lab::dynamics::{extragradient_vi, ExtragradientOptions};
use minmax_lab::gallery;
use minmax_lab::verify::{box_vi_residual, verify_linearvi};

fn main() -> minmax_lab::Result<()> {
    for seed in 0..5 {
        let vi = gallery::random_linearvi(6, seed, true, 1e-3)?;
        let opts = ExtragradientOptions { tol: 1e-6, ..ExtragradientOptions::default() };
        let run = extragradient_vi(&vi.matrix, &vi.c, &opts)?;
        let cert = verify_linearvi(&vi, &run.point);
        println!(
            "seed {seed}: monotone={} iterations={} box residual={:.2e} single-coordinate residual={:.2e} passed={}",
            vi.is_monotone(),
            run.iterations,
            box_vi_residual(&vi.operator(&run.point), &run.point),
            cert.residual,
            cert.passed
        );
    }
    Ok(())
}
