use super::{ProblemKind, Pullback, ReductionTrace};
use crate::error::{Error, Result};
use crate::linalg::{self, Matrix};
use crate::model::{Certificate, LinearVi, Method, Params, PolymatrixGame, Sense};

/// Coefficients `(α, β)` of `u(x_i, x_j) = α x_i x_j + β x_i + (c − d) x_j + d`
/// for a 2×2 payoff `[[a, b], [c, d]]`, so that `∂u/∂x_i = α x_j + β`.
pub fn polymatrix_coefficients(m: &Matrix) -> (f64, f64) {
    let (a, b, c, d) = (m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]);
    (a - b - c + d, b - d)
}

/// `F(z) = Dz + c` with `F_i = −∂u_i/∂z_i / 6`, so that VI solutions with
/// `ρ = ε*/6` are `ε*`-equilibria. The norms are certified when every
/// degree is at most 3.
pub fn polymatrix_to_linearvi(game: &PolymatrixGame) -> Result<(LinearVi, ReductionTrace)> {
    game.validate()?;
    let n = game.n;
    let mut d = Matrix::zeros(n, n);
    let mut c = vec![0.0; n];
    for p in &game.payoffs {
        let (alpha, beta) = polymatrix_coefficients(&p.matrix);
        d[(p.from, p.to)] = -alpha / 6.0;
        c[p.from] -= beta / 6.0;
    }
    let rho = game.eps_star / 6.0;
    let mut vi = LinearVi::new(d, c, rho)?;
    vi.norm_certified &= game.max_degree() <= 3;
    let trace = ReductionTrace::new(
        ProblemKind::Polymatrix,
        ProblemKind::Linearvi,
        Pullback::MixedStrategy,
        &[("eps_star", game.eps_star), ("rho_star", rho)],
    );
    Ok((vi, trace))
}

/// Worst regret `max_i max_{x'∈{0,1}} u_i(x', z_{−i}) − u_i(z)`; utilities are
/// linear in the own strategy, so pure deviations suffice. Passes iff the
/// regret is at most `ε*`.
pub fn linearvi_solution_to_polymatrix(z: &[f64], game: &PolymatrixGame) -> Result<Certificate> {
    if z.len() != game.n {
        return Err(Error::DimensionMismatch { expected: game.n, found: z.len() });
    }
    let mut worst = 0.0f64;
    let mut worst_player = 0usize;
    for i in 0..game.n {
        let u = game.utility(i, z);
        let best = game.utility_with(i, 0.0, z).max(game.utility_with(i, 1.0, z));
        if best - u > worst {
            worst = best - u;
            worst_player = i;
        }
    }
    Ok(Certificate::new(Method::PolymatrixRegret, z.to_vec(), worst, game.eps_star, Sense::AtMost)
        .with_params(Params { eps: Some(game.eps_star), ..Params::default() })
        .with_detail("worst_player", worst_player as f64)
        .require(linalg::in_unit_box(z, 0.0), "strategy outside [0,1]"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gallery;
    use crate::model::EdgePayoff;

    #[test]
    fn matching_pennies_operator() {
        let (vi, trace) = polymatrix_to_linearvi(&gallery::matching_pennies()).unwrap();
        let t = 1.0 / 3.0;
        assert_eq!(vi.matrix.to_rows(), vec![vec![0.0, -t], vec![t, 0.0]]);
        assert_eq!(vi.c, vec![1.0 / 6.0, -1.0 / 6.0]);
        assert!(vi.norm_certified);
        assert_eq!(trace.constant("rho_star"), Some(0.088 / 6.0));
        assert_eq!(vi.operator(&[0.5, 0.5]), vec![0.0, 0.0]);
    }

    #[test]
    fn constant_game_is_trivial() {
        let m = Matrix::from_rows(vec![vec![0.3, 0.3], vec![0.3, 0.3]]).unwrap();
        let g = PolymatrixGame::new(
            3,
            vec![[0, 1]],
            vec![EdgePayoff { from: 0, to: 1, matrix: m.clone() }, EdgePayoff { from: 1, to: 0, matrix: m }],
            0.088,
        )
        .unwrap();
        let (vi, _) = polymatrix_to_linearvi(&g).unwrap();
        assert!(vi.matrix.is_zero() && vi.c.iter().all(|v| *v == 0.0));
        assert_eq!(linearvi_solution_to_polymatrix(&[0.2, 0.9, 0.4], &g).unwrap().residual, 0.0);
    }

    #[test]
    fn regret_examples() {
        let g = gallery::matching_pennies();
        assert_eq!(linearvi_solution_to_polymatrix(&[0.5, 0.5], &g).unwrap().residual, 0.0);
        let c = linearvi_solution_to_polymatrix(&[1.0, 1.0], &g).unwrap();
        assert_eq!(c.residual, 1.0);
        assert_eq!(c.details["worst_player"], 1.0);
        assert!(!c.passed);
    }

    #[test]
    fn operator_matches_utility_derivative() {
        for seed in 0..10 {
            let g = gallery::random_polymatrix(5, seed).unwrap();
            let (vi, _) = polymatrix_to_linearvi(&g).unwrap();
            let z = [0.1, 0.7, 0.4, 0.9, 0.3];
            let f = vi.operator(&z);
            for i in 0..5 {
                // Utility is affine in z_i: slope from two exact evaluations.
                let slope = g.utility_with(i, 1.0, &z) - g.utility_with(i, 0.0, &z);
                assert!((f[i] + slope / 6.0).abs() < 1e-12);
            }
        }
    }
}
