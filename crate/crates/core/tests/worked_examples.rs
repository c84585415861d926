//! Small hand-checkable cases, each compared against a value computed
//! independently inside the test.

use minmax_lab::dynamics::{
    self, alpha_from_eps_delta, eps_delta_from_alpha, qvi_alpha, qvi_reverse_bound, ExtragradientOptions,
};
use minmax_lab::gallery;
use minmax_lab::linalg::{self, Matrix};
use minmax_lab::model::{eval_constraint, ConstraintSet, LinearVi};
use minmax_lab::polytope::{feasibility, hausdorff, lp_min, project_polytope, BoxPolytope, ProjectionOptions};
use minmax_lab::reductions::{
    independent_set_localmin_instance, linearvi_solution_to_polymatrix, linearvi_to_jc_minmax,
    polymatrix_to_linearvi,
};
use minmax_lab::sperner::proximal_selector;
use minmax_lab::verify::verify_local_minmax;
use minmax_lab::{CorrespondenceSpec, Operator, QviInstance};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

fn scalar_vi(d: f64, c: f64) -> LinearVi {
    LinearVi::new(Matrix::from_rows(vec![vec![d]]).unwrap(), vec![c], 0.01).unwrap()
}

#[test]
fn jc_gadget_value_and_pseudo_gradient() {
    let (inst, _) = linearvi_to_jc_minmax(&scalar_vi(0.0, -1.0), 1.0).unwrap();
    let (x, y) = (0.5, 0.2);
    assert!(close(inst.value(&[x], &[y]), (x - y) * (0.0 * x - 1.0), 1e-12));

    let (inst, _) = linearvi_to_jc_minmax(&scalar_vi(1.0, 0.0), 1.0).unwrap();
    let f = |x: f64, y: f64| inst.value(&[x], &[y]);
    let h = 1e-6;
    let fd = [(f(0.5 + h, 0.5) - f(0.5 - h, 0.5)) / (2.0 * h), -(f(0.5, 0.5 + h) - f(0.5, 0.5 - h)) / (2.0 * h)];
    let pg = inst.pseudo_gradient(&[0.5], &[0.5]);
    assert!(close(pg[0], 0.5, 1e-12) && close(pg[1], 0.5, 1e-12));
    assert!(close(fd[0], pg[0], 1e-6) && close(fd[1], pg[1], 1e-6));
}

#[test]
fn inf_norm_ball_constraint_value() {
    let set = ConstraintSet::inf_norm_ball(2, 0.1);
    let (x, y): ([f64; 2], [f64; 2]) = ([0.3, 0.3], [0.15, 0.3]);
    let oracle = x.iter().zip(&y).map(|(a, b)| (a - b).abs() - 0.1).fold(f64::MIN, f64::max);
    assert!(close(eval_constraint(&set, &x, &y).unwrap(), oracle, 1e-12));
    assert!(close(oracle, 0.05, 1e-12));
}

#[test]
fn projection_onto_tilted_halfplane_matches_dense_grid() {
    let poly = BoxPolytope::from_rows(2, vec![(vec![1.0, 2.0], 1.0)]);
    let p = [1.0, 1.0];
    let pi = project_polytope(&poly, &p, &ProjectionOptions::default()).unwrap();
    assert!(close(pi[0], 0.6, 1e-9) && close(pi[1], 0.2, 1e-9));
    let n = 2000;
    let mut best = (f64::INFINITY, [0.0, 0.0]);
    for i in 0..=n {
        for j in 0..=n {
            let q = [i as f64 / n as f64, j as f64 / n as f64];
            if q[0] + 2.0 * q[1] <= 1.0 {
                let dist = linalg::dist(&p, &q);
                if dist < best.0 {
                    best = (dist, q);
                }
            }
        }
    }
    assert!(linalg::dist(&best.1, &pi) <= 2e-3);
    assert!(linalg::dist(&p, &pi) <= best.0 + 1e-12);
}

#[test]
fn lp_tie_breaks_to_smallest_vertex() {
    let poly = BoxPolytope::from_rows(2, vec![(vec![1.0, 1.0], 1.0)]);
    let (z, value) = lp_min(&poly, &[-1.0, -1.0]).unwrap();
    let vertex_min = [[0.0, 0.0], [1.0, 0.0], [0.0, 1.0]].iter().map(|v| -v[0] - v[1]).fold(f64::MAX, f64::min);
    assert!(close(value, vertex_min, 1e-12));
    assert_eq!(z, vec![0.0, 1.0]);
}

#[test]
fn irrational_correspondence_at_a_rational_point() {
    let spec = gallery::irrational_kakutani();
    let z = feasibility(&spec.at(&[0.8, 0.8])).unwrap();
    // x' = 0.8 and 0.8·y' = 0.5.
    assert!(close(z[0], 0.8, 1e-9) && close(z[1], 0.5 / 0.8, 1e-9));
    assert!(feasibility(&spec.at(&[0.2, 0.2])).is_none());
}

#[test]
fn hausdorff_distance_of_half_box_approaches_one_half() {
    let pa = BoxPolytope::unit_box(2);
    let pb = BoxPolytope::interval_product(&[0.0, 0.0], &[0.5, 1.0]);
    let coarse = hausdorff(&pa, &pb, 8).unwrap();
    let fine = hausdorff(&pa, &pb, 64).unwrap();
    assert!(coarse <= fine + 1e-12 && fine <= 0.5 + 1e-9);
    assert!(fine >= 0.45);
}

#[test]
fn descent_ascent_maps_on_the_separation_instance() {
    let g = gallery::eq_not_vi();
    let inst = &g.instance;
    // Per-player map at (1/2, 1/2): both slices are [0, 1/2].
    let (x, y): (f64, f64) = (0.5, 0.5);
    let (gx, gy) = (0.8 * 2.0 * (x - 1.0), -0.8 * 2.0 * (y - 0.5));
    let oracle = ((x - gx).clamp(0.0, 1.0 - y), (y + gy).clamp(0.0, 1.0 - x));
    let (xp, yp) = dynamics::gda_map(inst, &[x], &[y]).unwrap();
    assert!(close(xp[0], oracle.0, 1e-9) && close(yp[0], oracle.1, 1e-9));
    // Joint map at (1, 0): project (1, 0.8) onto x + y ≤ 1.
    let step = (1.0 + 0.8 - 1.0) / 2.0;
    let (xp, yp) = dynamics::sgda_map(inst, &[1.0], &[0.0]).unwrap();
    assert!(close(xp[0], 1.0 - step, 1e-9) && close(yp[0], 0.8 - step, 1e-9));
    let r = dynamics::residual(inst, &[1.0], &[0.0], dynamics::MapKind::Sgda).unwrap();
    assert!(close(r, 0.4 * 2f64.sqrt(), 1e-9));
}

#[test]
fn matching_pennies_reduction_and_regret() {
    let game = gallery::matching_pennies();
    let (vi, _) = polymatrix_to_linearvi(&game).unwrap();
    let want = [[0.0, -1.0 / 3.0], [1.0 / 3.0, 0.0]];
    for i in 0..2 {
        for j in 0..2 {
            assert!(close(vi.matrix[(i, j)], want[i][j], 1e-15));
        }
    }
    assert!(close(vi.c[0], 1.0 / 6.0, 1e-15) && close(vi.c[1], -1.0 / 6.0, 1e-15));
    assert!(vi.operator(&[0.5, 0.5]).iter().all(|v| v.abs() < 1e-15));

    let run = dynamics::extragradient_vi(&vi.matrix, &vi.c, &ExtragradientOptions::default()).unwrap();
    assert!(linalg::dist(&run.point, &[0.5, 0.5]) <= 1e-6);

    // Brute-force best responses at (1, 1).
    let z = [1.0, 1.0];
    let oracle = (0..2)
        .map(|i| {
            let u = game.utility(i, &z);
            game.utility_with(i, 0.0, &z).max(game.utility_with(i, 1.0, &z)) - u
        })
        .fold(0.0, f64::max);
    let cert = linearvi_solution_to_polymatrix(&z, &game).unwrap();
    assert!(close(cert.residual, oracle, 1e-12) && close(oracle, 1.0, 1e-12));
    assert_eq!(cert.details["worst_player"], 1.0);
    assert!(!cert.passed);
}

#[test]
fn fixed_point_tolerance_solves_its_quadratic() {
    let (g, l, delta, eps) = (5.0 * 2.0, 7.0, 0.01, 0.001);
    let alpha = alpha_from_eps_delta(g, l, delta, eps).unwrap();
    // α is the positive root of α² + (G+δ)α − (ε − Lδ²/2).
    let q = alpha * alpha + (g + delta) * alpha - (eps - l * delta * delta / 2.0);
    assert!(alpha > 0.0 && q.abs() <= 1e-12 * eps, "alpha {alpha}, q {q}");
    assert_eq!(alpha_from_eps_delta(1.0, 0.0, 0.0, 0.0).unwrap(), 0.0);
    let (e, d) = eps_delta_from_alpha(7.0, 1.0);
    assert!(close(e, 7.0 / 1369.0, 1e-15) && close(d, 1.0 / 37.0, 1e-15));
    assert!(close(qvi_reverse_bound(1.0, 0.1, 0.01, 1).unwrap(), 0.5, 1e-12));
    let (g, l, delta, eps) = (3.0 * 2f64.sqrt(), 1.0, 0.05, 0.01);
    let a = alpha_from_eps_delta(g, l, delta, eps).unwrap();
    assert!(close(qvi_alpha(g, l, delta, eps).unwrap(), a * a / 2.0, 1e-18));
}

#[test]
fn gadget_locality_regime_at_reference_accuracy() {
    let (_, trace) = linearvi_to_jc_minmax(
        &LinearVi::new(Matrix::zeros(1, 1), vec![0.0], 0.088 / 6.0).unwrap(),
        1.0,
    )
    .unwrap();
    let (delta, eps) = (trace.constant("delta").unwrap(), trace.constant("eps").unwrap());
    assert!(close(delta, 9.78e-4, 1e-6));
    assert!(delta < (2.0 * eps / 7.0).sqrt());
}

#[test]
fn selector_on_centred_operator_is_constant() {
    let op = Operator::affine(Matrix::identity(1), vec![-0.5]).unwrap();
    let qvi = QviInstance::new(CorrespondenceSpec::new(1, vec![], 0.0).unwrap(), op, 0.0).unwrap();
    for v in [0.0, 0.125, 0.5, 0.9, 1.0] {
        let p = proximal_selector(&qvi, &[v], 0.0, 1.0).unwrap();
        assert!(close(p[0], 0.5, 1e-12));
    }
}

#[test]
fn independent_set_certificates_agree_with_corner_enumeration() {
    let graphs: [Vec<[usize; 2]>; 3] = [vec![[0, 1], [1, 2], [0, 2]], vec![[0, 1], [1, 2]], vec![]];
    for edges in &graphs {
        for k in [1.0, 2.0] {
            let g = independent_set_localmin_instance(3, edges, k).unwrap();
            let inst = &g.instance;
            let (x0, y) = (&g.probe.0, &g.probe.1);
            let f0 = inst.value(x0, y);
            let mut best_gain = 0.0f64;
            for mask in 0u32..8 {
                let c: Vec<f64> = (0..3).map(|i| ((mask >> i) & 1) as f64).collect();
                if linalg::dist(&c, x0) <= inst.delta + 1e-12 && inst.g1().eval(&c, y).unwrap() <= inst.nu + 1e-12 {
                    best_gain = best_gain.max(f0 - inst.value(&c, y));
                }
            }
            let cert = verify_local_minmax(inst, x0, y, 0.25).unwrap();
            assert_eq!(cert.passed, best_gain <= inst.eps, "edges {edges:?}, k {k}");
        }
    }
}
