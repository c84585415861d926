//! A point can be a local min-max equilibrium and a fixed point of
//! projected gradient descent-ascent while failing the variational
//! inequality over the joint feasible set.

use minmax_lab::dynamics::{iterate, residual, IterateOptions, MapKind};
use minmax_lab::gallery;
use minmax_lab::reductions::{jointly_convex_vi, minmax_to_qvi};
use minmax_lab::verify::{verify_gda_fixed_point, verify_local_minmax, verify_qvi};

fn main() -> minmax_lab::Result<()> {
    let g = gallery::eq_not_vi();
    let inst = &g.instance;
    let (x, y) = (&g.probe.0, &g.probe.1);
    println!("instance {} with probe (x, y) = ({x:?}, {y:?})", g.name);
    println!("f at probe: {}", inst.value(x, y));
    println!("pseudo-gradient at probe: {:?}", inst.pseudo_gradient(x, y));

    let gda = verify_gda_fixed_point(inst, x, y, 1e-9)?;
    println!("GDA fixed point:    passed={} residual={:.3e}", gda.passed, gda.residual);

    let local = verify_local_minmax(inst, x, y, inst.delta / 10.0)?;
    println!("local min-max:      passed={} residual={:.3e}", local.passed, local.residual);

    let product = verify_qvi(&minmax_to_qvi(inst)?, &[x[0], y[0]])?;
    println!("slice QVI:          passed={} residual={:.3e}", product.passed, product.residual);

    let joint = verify_qvi(&jointly_convex_vi(inst)?, &[x[0], y[0]])?;
    println!("VI over joint set:  passed={} residual={:.3e} (claimed gap {})", joint.passed, joint.residual, g.claims["vi_gap"]);

    let safe = residual(inst, x, y, MapKind::Sgda)?;
    println!("safe-map displacement at probe: {safe:.6} (0.4·√2 = {:.6})", 0.4 * 2f64.sqrt());

    let run = iterate(inst, (&[0.5], &[0.5]), MapKind::Sgda, &IterateOptions::default())?;
    let vi = verify_qvi(&jointly_convex_vi(inst)?, &[run.x[0], run.y[0]])?;
    println!(
        "safe-map iteration from (0.5, 0.5): ({:.6}, {:.6}) after {} steps, VI residual {:.3e}",
        run.x[0], run.y[0], run.iterations, vi.residual
    );
    Ok(())
}
