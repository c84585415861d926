use proptest::prelude::*;

use minmax_lab::dynamics::{self, IterateOptions, MapKind};
use minmax_lab::gallery;
use minmax_lab::linalg::{self, Matrix};
use minmax_lab::model::{Certificate, Objective};
use minmax_lab::polytope::{lp_min, project_polytope, BoxPolytope, ProjectionOptions};
use minmax_lab::reductions::{
    linearvi_to_bilinear_minmax, linearvi_to_jc_minmax, minmax_to_qvi, polymatrix_to_linearvi,
};
use minmax_lab::sperner::{kuhn_simplices, sperner_color, SpernerGrid};
use minmax_lab::verify::{box_vi_residual, single_component_residual, verify_qvi};

/// A polytope with a known interior-or-boundary point `z0`.
fn polytope_with_point() -> impl Strategy<Value = (BoxPolytope, Vec<f64>)> {
    (1usize..=4).prop_flat_map(|d| {
        let z0 = prop::collection::vec(0.0..=1.0f64, d);
        let rows = prop::collection::vec((prop::collection::vec(-1.0..=1.0f64, d), 0.0..0.5f64), 0..4);
        (z0, rows).prop_map(move |(z0, rows)| {
            let rows = rows.into_iter().map(|(a, s)| (a.clone(), linalg::dot(&a, &z0) + s)).collect();
            (BoxPolytope::from_rows(d, rows), z0)
        })
    })
}

fn point(d: usize) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-0.5..=1.5f64, d)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projection_is_feasible_optimal_and_idempotent(
        (poly, z0) in polytope_with_point(),
        raw in prop::collection::vec(-0.5..=1.5f64, 4),
    ) {
        let d = poly.dim();
        let p = &raw[..d];
        let opts = ProjectionOptions::default();
        let pi = project_polytope(&poly, p, &opts).unwrap();
        prop_assert!(poly.max_violation(&pi) <= 1e-7);
        // Variational characterization against the known feasible point.
        let lhs = linalg::dot(&linalg::sub(p, &pi), &linalg::sub(&z0, &pi));
        prop_assert!(lhs <= 1e-5, "obtuse-angle condition violated: {lhs}");
        prop_assert!(linalg::dist(p, &pi) <= linalg::dist(p, &z0) + 1e-7);
        let again = project_polytope(&poly, &pi, &opts).unwrap();
        prop_assert!(linalg::dist(&pi, &again) <= 1e-6);
    }

    #[test]
    fn lp_min_is_a_lower_bound((poly, z0) in polytope_with_point(), cost in prop::collection::vec(-1.0..=1.0f64, 4)) {
        let cost = &cost[..poly.dim()];
        let (argmin, value) = lp_min(&poly, cost).unwrap();
        prop_assert!(poly.max_violation(&argmin) <= 1e-7);
        prop_assert!((linalg::dot(cost, &argmin) - value).abs() <= 1e-9);
        prop_assert!(value <= linalg::dot(cost, &z0) + 1e-9);
    }

    #[test]
    fn relaxation_is_monotone((poly, _z0) in polytope_with_point(), z in point(4), nu1 in 0.0..1.0f64, extra in 0.0..1.0f64) {
        let z = &z[..poly.dim()];
        let a = poly.relaxed(nu1).max_violation(z);
        let b = poly.relaxed(nu1 + extra).max_violation(z);
        prop_assert!(b <= a + 1e-12);
        if poly.contains(z, 0.0) {
            prop_assert!(poly.relaxed(nu1).contains(z, 0.0));
        }
    }

    #[test]
    fn sperner_colors_respect_the_boundary(
        d in 1usize..=4,
        m in 1usize..=8,
        coords in prop::collection::vec(0usize..=8, 4),
        p in prop::collection::vec(0.0..=1.0f64, 4),
    ) {
        let v: Vec<f64> = coords[..d].iter().map(|c| (*c).min(m) as f64 / m as f64).collect();
        let color = sperner_color(&v, &p[..d]);
        prop_assert!(color <= d);
        if color > 0 {
            prop_assert!(v[color - 1] > 0.0);
            prop_assert!(p[color - 1] <= v[color - 1]);
        }
        if v.iter().any(|x| *x == 1.0) {
            prop_assert_ne!(color, 0);
        }
    }

    #[test]
    fn box_residual_matches_lp_oracle(d in 1usize..=4, fz in prop::collection::vec(-2.0..=2.0f64, 4), z in prop::collection::vec(0.0..=1.0f64, 4)) {
        let (fz, z) = (&fz[..d], &z[..d]);
        let (_, value) = lp_min(&BoxPolytope::unit_box(d), fz).unwrap();
        let oracle = value - linalg::dot(fz, z);
        prop_assert!((box_vi_residual(fz, z) - oracle).abs() <= 1e-9);
        prop_assert!(single_component_residual(fz, z) >= oracle - 1e-12);
    }

    #[test]
    fn quadratic_gradient_matches_finite_differences(
        d in 1usize..=3,
        entries in prop::collection::vec(-1.0..=1.0f64, 36),
        h in prop::collection::vec(-1.0..=1.0f64, 6),
        z in prop::collection::vec(0.0..=1.0f64, 6),
    ) {
        let n = 2 * d;
        let m = Matrix::from_fn(n, n, |i, j| entries[i * 6 + j]);
        let obj = Objective::quadratic(m, h[..n].to_vec(), 0.3).unwrap();
        let (x, y) = (&z[..d], &z[d..n]);
        let (gx, gy) = obj.gradient(x, y);
        let g = linalg::concat(&gx, &gy);
        let step = 1e-6;
        for i in 0..n {
            let mut up = z[..n].to_vec();
            let mut dn = z[..n].to_vec();
            up[i] += step;
            dn[i] -= step;
            let fd = (obj.value(&up[..d], &up[d..]) - obj.value(&dn[..d], &dn[d..])) / (2.0 * step);
            prop_assert!((fd - g[i]).abs() <= 1e-6, "coordinate {i}: {fd} vs {}", g[i]);
        }
    }

    #[test]
    fn polymatrix_operator_is_scaled_utility_slope(seed in 0u64..1000, n in 2usize..=5, z in prop::collection::vec(0.0..=1.0f64, 5)) {
        let game = gallery::random_polymatrix(n, seed).unwrap();
        let (vi, _) = polymatrix_to_linearvi(&game).unwrap();
        let z = &z[..n];
        let f = vi.operator(z);
        for i in 0..n {
            let slope = game.utility_with(i, 1.0, z) - game.utility_with(i, 0.0, z);
            prop_assert!((f[i] + slope / 6.0).abs() <= 1e-9);
        }
        // Pure deviations make the regret an exact multiple of the
        // single-coordinate VI residual.
        let regret = minmax_lab::reductions::linearvi_solution_to_polymatrix(z, &game).unwrap().residual;
        prop_assert!((regret + 6.0 * single_component_residual(&f, z)).abs() <= 1e-9);
    }

    #[test]
    fn gadget_constants_follow_from_gamma(d in 1usize..=5, seed in 0u64..500, gamma in 0.01..=1.0f64, rho in 0.001..0.2f64) {
        let vi = gallery::random_linearvi(d, seed, false, rho).unwrap();
        let (jc, t) = linearvi_to_jc_minmax(&vi, gamma).unwrap();
        let tol = 1e-15;
        prop_assert!((t.constant("delta").unwrap() - gamma * rho / 15.0).abs() <= tol);
        prop_assert!((t.constant("eps").unwrap() - gamma * rho * rho / 60.0).abs() <= tol);
        prop_assert!((t.constant("ball_radius").unwrap() - rho / 4.0).abs() <= tol);
        prop_assert!(jc.lipschitz <= 5.0 * (d as f64).sqrt() + 1e-9);
        prop_assert!(jc.smoothness <= 7.0 + 1e-9);
        let (bl, t) = linearvi_to_bilinear_minmax(&vi, gamma).unwrap();
        let delta = t.constant("delta").unwrap();
        prop_assert!((t.constant("nu").unwrap() - rho * delta / (4.0 * d as f64)).abs() <= tol);
        prop_assert!(bl.lipschitz <= 3.0 * (d as f64).sqrt() + 1e-9);
        prop_assert!(bl.smoothness <= 1.0 + 1e-9);
    }

    #[test]
    fn member_points_never_have_positive_qvi_residual(x in 0.0..=1.0f64, y in 0.0..=1.0f64) {
        let g = gallery::eq_not_vi();
        let qvi = minmax_to_qvi(&g.instance).unwrap();
        if let Ok(cert) = verify_qvi(&qvi, &[x, y]) {
            if cert.details["membership_violation"] <= 1e-9 {
                prop_assert!(cert.residual <= 1e-12);
            }
            let pg = g.instance.pseudo_gradient(&[x], &[y]);
            prop_assert_eq!(qvi.operator_at(&[x, y]), pg);
        }
    }

    #[test]
    fn joint_fixed_points_are_per_player_fixed_points(x in 0.0..=1.0f64, y in 0.0..=1.0f64) {
        let g = gallery::eq_not_vi();
        let inst = &g.instance;
        let run = dynamics::iterate(inst, (&[x], &[y]), MapKind::Sgda, &IterateOptions::default()).unwrap();
        prop_assume!(run.converged);
        let r = dynamics::residual(inst, &run.x, &run.y, MapKind::Gda).unwrap();
        prop_assert!(r <= 1e-6, "gda residual {r} at {:?}", (run.x, run.y));
    }

    #[test]
    fn certificates_round_trip_through_json(res in -1.0..1.0f64, thr in -1.0..1.0f64, z in prop::collection::vec(0.0..=1.0f64, 1..5)) {
        let cert = Certificate::new(
            minmax_lab::model::Method::Qvi, z, res, thr, minmax_lab::model::Sense::AtLeast,
        ).with_detail("k", 0.5);
        let back: Certificate = serde_json::from_str(&serde_json::to_string(&cert).unwrap()).unwrap();
        prop_assert_eq!(back, cert);
    }
}

#[test]
fn kuhn_triangulation_covers_each_cubelet_with_d_factorial_simplices() {
    for d in 1..=3usize {
        for m in 1..=4usize {
            let grid = SpernerGrid::new(d, m).unwrap();
            let simplices: Vec<_> = kuhn_simplices(grid).collect();
            let fact: usize = (1..=d).product();
            assert_eq!(simplices.len(), m.pow(d as u32) * fact);
            for s in &simplices {
                assert_eq!(s.len(), d + 1);
                for w in s.windows(2) {
                    let diff: Vec<i64> = w[1].iter().zip(&w[0]).map(|(a, b)| *a as i64 - *b as i64).collect();
                    assert_eq!(diff.iter().sum::<i64>(), 1);
                    assert!(diff.iter().all(|x| *x == 0 || *x == 1));
                }
                assert!(s.iter().flatten().all(|c| *c <= m));
            }
            let mut sorted = simplices.clone();
            sorted.sort();
            sorted.dedup();
            assert_eq!(sorted.len(), simplices.len());
        }
    }
}

#[test]
fn monotone_random_vis_have_psd_symmetric_part() {
    for seed in 0..20 {
        let vi = gallery::random_linearvi(5, seed, true, 0.01).unwrap();
        let sym = vi.matrix.add(&vi.matrix.transpose());
        assert!(sym.symmetric_eigenvalues().iter().all(|e| *e >= -1e-12));
        assert!(vi.matrix.norm_1() <= 1.0 && vi.matrix.norm_inf() <= 1.0);
    }
}
