//! Local-minimum instances built from graphs: the origin is an approximate
//! local minimum exactly when no independent set of the requested size
//! exists.

use minmax_lab::reductions::independent_set_localmin_instance;
use minmax_lab::verify::verify_local_minmax;

fn main() -> minmax_lab::Result<()> {
    let graphs: [(&str, Vec<[usize; 2]>); 3] =
        [("triangle", vec![[0, 1], [1, 2], [0, 2]]), ("path", vec![[0, 1], [1, 2]]), ("empty", vec![])];
    for (name, edges) in graphs {
        for k in [1.0, 2.0] {
            let g = independent_set_localmin_instance(3, &edges, k)?;
            let inst = &g.instance;
            // A lattice step of 1/4 reaches every 0/1 corner of the ball.
            let cert = verify_local_minmax(inst, &g.probe.0, &g.probe.1, 0.25)?;
            println!(
                "{name:>8} k={k}: eps={:.6} delta={:.4} origin is a local min: {} (residual {:.4})",
                inst.eps, inst.delta, cert.passed, cert.residual
            );
        }
    }
    Ok(())
}
