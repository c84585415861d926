//! Constants of the two gadget reductions, and sampled gradient-norm and
//! smoothness probes of the objectives they produce.

use minmax_lab::gallery;
use minmax_lab::linalg;
use minmax_lab::reductions::{linearvi_to_bilinear_minmax, linearvi_to_jc_minmax};
use minmax_lab::MinMaxInstance;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn probe(inst: &MinMaxInstance, samples: usize) -> (f64, f64) {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let d = inst.dim;
    let mut point = || -> Vec<f64> { (0..2 * d).map(|_| rng.gen::<f64>()).collect() };
    let grad = |z: &[f64]| {
        let (gx, gy) = inst.gradient(&z[..d], &z[d..]);
        linalg::concat(&gx, &gy)
    };
    let (mut g, mut l) = (0.0f64, 0.0f64);
    for _ in 0..samples {
        let (a, b) = (point(), point());
        let (ga, gb) = (grad(&a), grad(&b));
        g = g.max(linalg::norm(&ga));
        l = l.max(linalg::dist(&ga, &gb) / linalg::dist(&a, &b));
    }
    (g, l)
}

fn main() -> minmax_lab::Result<()> {
    for d in [1, 2, 4] {
        let vi = gallery::random_linearvi(d, 3, false, 0.05)?;
        for (inst, trace) in [linearvi_to_jc_minmax(&vi, 1.0)?, linearvi_to_bilinear_minmax(&vi, 1.0)?] {
            let (g, l) = probe(&inst, 2000);
            println!("d={d} {:?}: {:?}", trace.target, trace.constants);
            println!(
                "    sampled |grad| {g:.4} <= G {:.4}, sampled smoothness {l:.4} <= L {}, local regime {}",
                inst.lipschitz,
                inst.smoothness,
                inst.satisfies_local_regime()
            );
        }
    }
    Ok(())
}
