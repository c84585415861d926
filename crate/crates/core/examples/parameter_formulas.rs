//! Tolerance conversions between local min-max points, descent-ascent fixed
//! points and QVI solutions, and the worst-case Sperner parameters.

use minmax_lab::dynamics::{alpha_from_eps_delta, eps_delta_from_alpha, qvi_alpha, qvi_reverse_bound};
use minmax_lab::sperner::reference_params;

fn main() -> minmax_lab::Result<()> {
    let (g, l, delta, eps) = (10.0, 7.0, 0.01, 0.001);
    let alpha = alpha_from_eps_delta(g, l, delta, eps)?;
    println!("alpha_from_eps_delta(G={g}, L={l}, delta={delta}, eps={eps}) = {alpha:.6e}");
    println!("qvi_alpha(...) = {:.6e} (alpha²/2 = {:.6e})", qvi_alpha(g, l, delta, eps)?, alpha * alpha / 2.0);
    println!("eps_delta_from_alpha(L=7, alpha=1) = {:?}", eps_delta_from_alpha(7.0, 1.0));
    println!("qvi_reverse_bound(L=1, delta=0.1, eps=0.01, d=1) = {}", qvi_reverse_bound(1.0, 0.1, 0.01, 1)?);

    for (d, e, nu, lip) in [(1, 1.0, 1.0, 1.0), (2, 0.1, 0.05, 1.0)] {
        let r = reference_params(d, e, nu, lip)?;
        println!(
            "reference_params(d={d}, eps={e}, nu={nu}, L={lip}): eta={:.3e} mu={:.3e} gamma={:.3e}",
            r.params.eta, r.params.mu, r.params.gamma
        );
        println!(
            "    gamma + sqrt(d)·omega = {:.3e} <= nu: {}; accuracy lhs {:.3e} <= eps: {}; grid {:.3e} cubelets/axis, tractable {}",
            r.relaxation_lhs,
            r.relaxation_holds(),
            r.accuracy_lhs,
            r.accuracy_holds(),
            r.grid_count,
            r.tractable
        );
    }
    Ok(())
}
