//! Named instances with the constants claimed for them, plus seeded random
//! families.
//!
//! Every generator is deterministic. Claimed constants live next to each
//! instance in [`GalleryInstance::claims`] so tests compare against the
//! instance rather than against literals.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::linalg::Matrix;
use crate::model::{
    BilinearPiece, ConstraintSet, Constraints, CorrespondenceSpec, EdgePayoff, LinearVi, MinMaxInstance, Objective,
    PolymatrixGame, DEFAULT_EPS_STAR,
};

/// Generator revision; bump when any emitted instance changes.
pub const GALLERY_VERSION: u32 = 1;

/// Names accepted by [`by_name`].
pub const NAMES: &[&str] = &[
    "eq-not-vi",
    "irrational-kakutani",
    "nonexistence",
    "indep-set",
    "matching-pennies",
    "random-polymatrix",
    "random-linearvi",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GalleryInstance {
    pub name: String,
    pub instance: MinMaxInstance,
    /// Point the claims refer to, as `(x, y)`.
    pub probe: (Vec<f64>, Vec<f64>),
    pub claims: BTreeMap<String, f64>,
}

fn claims(entries: &[(&str, f64)]) -> BTreeMap<String, f64> {
    entries.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

/// `f(x, y) = 4/5((x−1)² − (y−1/2)² + 1/4)` with the shared constraint
/// `x + y ≤ 1`. The point `(1, 0)` is a local min-max equilibrium and a GDA
/// fixed point, but fails the variational inequality over the joint set by
/// `4/5`.
pub fn eq_not_vi() -> GalleryInstance {
    let m = Matrix::diagonal(&[0.8, -0.8]);
    let objective = Objective::quadratic(m, vec![-1.6, 0.8], 0.8).expect("static objective");
    let joint = ConstraintSet::new(vec![BilinearPiece::linear(vec![1.0], vec![1.0], -1.0)]).expect("static set");
    let constraints = Constraints::joint(joint).expect("linear set");
    let instance = MinMaxInstance::new(objective, constraints, 1e-3, 0.3, 0.0).expect("valid instance");
    GalleryInstance {
        name: "eq-not-vi".into(),
        instance,
        probe: (vec![1.0], vec![0.0]),
        claims: claims(&[
            ("smoothness", 1.6),
            ("lipschitz", 4.0 * 5f64.sqrt() / 5.0),
            ("vi_gap", 0.8),
            ("value_at_probe", 0.0),
        ]),
    }
}

/// `Q(x, y) = {(x', y') : x' = y, x·y' = 1/2}`, whose only fixed point is
/// `(1/√2, 1/√2)`.
pub fn irrational_kakutani() -> CorrespondenceSpec {
    let mut b_up = Matrix::zeros(2, 2);
    b_up[(1, 0)] = 1.0;
    let rows = vec![
        BilinearPiece::linear(vec![1.0, 0.0], vec![0.0, -1.0], 0.0),
        BilinearPiece::linear(vec![-1.0, 0.0], vec![0.0, 1.0], 0.0),
        BilinearPiece::bilinear(b_up.clone(), vec![0.0; 2], vec![0.0; 2], -0.5),
        BilinearPiece::bilinear(b_up.scaled(-1.0), vec![0.0; 2], vec![0.0; 2], 0.5),
    ];
    CorrespondenceSpec::new(2, rows, 0.0).expect("static spec")
}

/// `f(x, y) = 1 − x²/2`, `g₁ = max(x − y, y − x)`, `g₂ = x·y`, with `ν = 0`
/// and `δ = 5ε/4`.
///
/// The only feasible point is `(0, 0)`. Two readings of the minimizer's
/// gain from moving to `x' = δ` are recorded in the claims: the linear
/// reading `δ` (which exceeds `ε`) and the exact value `δ²/2` of this
/// objective (which does not). Under the printed `g₁` the minimizer cannot
/// move at all at `y = 0`.
pub fn nonexistence_instance(eps: f64) -> GalleryInstance {
    let delta = 1.25 * eps;
    let objective =
        Objective::quadratic(Matrix::from_rows(vec![vec![-0.5, 0.0], vec![0.0, 0.0]]).expect("2x2"), vec![0.0; 2], 1.0)
            .expect("static objective");
    let g1 = ConstraintSet::new(vec![
        BilinearPiece::linear(vec![1.0], vec![-1.0], 0.0),
        BilinearPiece::linear(vec![-1.0], vec![1.0], 0.0),
    ])
    .expect("static set");
    let g2 = ConstraintSet::new(vec![BilinearPiece::bilinear(Matrix::identity(1), vec![0.0], vec![0.0], 0.0)])
        .expect("static set");
    let constraints = Constraints::split(g1, g2).expect("valid split");
    let instance = MinMaxInstance::new(objective, constraints, eps, delta, 0.0).expect("valid instance");
    GalleryInstance {
        name: "nonexistence".into(),
        instance,
        probe: (vec![0.0], vec![0.0]),
        claims: claims(&[("linear_reading_gain", delta), ("exact_gain", delta * delta / 2.0)]),
    }
}

/// Minimization-only instance `f(x) = d⁻³ Σ_{(i,j)∈E} x_i x_j − Σ_i x_i`
/// under `‖x‖₁ ≤ k`, with `δ = √k` and `ε = max(k − d⁻⁸, 0)`. The origin is
/// an `(ε, δ)`-local minimum iff the graph has no independent set of size
/// `k`. The maximizer's variable does not enter `f`.
pub fn independent_set(d: usize, edges: &[[usize; 2]], k: f64) -> Result<GalleryInstance> {
    if d == 0 || edges.iter().any(|e| e[0] >= d || e[1] >= d || e[0] == e[1]) {
        return Err(crate::Error::InvalidInstance("edges must join distinct vertices below d".into()));
    }
    if !(0.0..=d as f64).contains(&k) {
        return Err(crate::Error::InvalidParameter(format!("k must lie in [0, {d}]")));
    }
    let df = d as f64;
    let mut m = Matrix::zeros(2 * d, 2 * d);
    for e in edges {
        m[(e[0], e[1])] += df.powi(-3);
    }
    let mut h = vec![-1.0; d];
    h.extend(vec![0.0; d]);
    let objective = Objective::quadratic(m, h, 0.0)?;
    let g1 = ConstraintSet::new(vec![BilinearPiece::linear(vec![1.0; d], vec![0.0; d], -k)])?;
    let constraints = Constraints::split(g1, ConstraintSet::unconstrained(d))?;
    let eps = (k - df.powi(-8)).max(0.0);
    let instance = MinMaxInstance::new(objective, constraints, eps, k.sqrt(), 0.0)?;
    Ok(GalleryInstance {
        name: "indep-set".into(),
        instance,
        probe: (vec![0.0; d], vec![0.0; d]),
        claims: claims(&[("k", k), ("smoothness_bound", 1.0 / df)]),
    })
}

/// Two players; player 1 wants to match, player 2 to mismatch.
pub fn matching_pennies() -> PolymatrixGame {
    let a12 = Matrix::identity(2);
    let a21 = Matrix::from_rows(vec![vec![0.0, 1.0], vec![1.0, 0.0]]).expect("2x2");
    PolymatrixGame::new(
        2,
        vec![[0, 1]],
        vec![EdgePayoff { from: 0, to: 1, matrix: a12 }, EdgePayoff { from: 1, to: 0, matrix: a21 }],
        DEFAULT_EPS_STAR,
    )
    .expect("static game")
}

/// Random polymatrix game with maximum degree 3: a random Hamiltonian path
/// plus extra edges kept with probability 0.3 while degrees allow, and
/// uniform payoffs in `[0, 1]`.
pub fn random_polymatrix(n: usize, seed: u64) -> Result<PolymatrixGame> {
    if n < 2 {
        return Err(crate::Error::InvalidParameter("need at least two players".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut deg = vec![0usize; n];
    let mut edges: Vec<[usize; 2]> = Vec::new();
    let add = |i: usize, j: usize, edges: &mut Vec<[usize; 2]>, deg: &mut [usize]| {
        edges.push([i.min(j), i.max(j)]);
        deg[i] += 1;
        deg[j] += 1;
    };
    for w in order.windows(2) {
        add(w[0], w[1], &mut edges, &mut deg);
    }
    let mut extra: Vec<[usize; 2]> =
        (0..n).flat_map(|i| (i + 1..n).map(move |j| [i, j])).filter(|e| !edges.contains(e)).collect();
    extra.shuffle(&mut rng);
    for e in extra {
        let keep = rng.gen_bool(0.3);
        if keep && deg[e[0]] < 3 && deg[e[1]] < 3 {
            add(e[0], e[1], &mut edges, &mut deg);
        }
    }
    edges.sort();
    let mut payoffs = Vec::with_capacity(2 * edges.len());
    for e in &edges {
        for (from, to) in [(e[0], e[1]), (e[1], e[0])] {
            let entries: Vec<Vec<f64>> = (0..2).map(|_| (0..2).map(|_| rng.gen::<f64>()).collect()).collect();
            let matrix = Matrix::from_rows(entries)?;
            payoffs.push(EdgePayoff { from, to, matrix });
        }
    }
    PolymatrixGame::new(n, edges, payoffs, DEFAULT_EPS_STAR)
}

fn uniform_matrix(rng: &mut ChaCha8Rng, d: usize) -> Matrix {
    let entries: Vec<Vec<f64>> = (0..d).map(|_| (0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect()).collect();
    Matrix::from_rows(entries).expect("square")
}

/// Random affine VI with entries in `[−1, 1]` and both `‖D‖₁, ‖D‖∞ ≤ 1`.
/// With `monotone`, `D` is a PSD matrix plus a skew-symmetric one, so
/// `D + Dᵀ ⪰ 0`.
pub fn random_linearvi(d: usize, seed: u64, monotone: bool, rho: f64) -> Result<LinearVi> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let a = uniform_matrix(&mut rng, d);
    let raw = if monotone {
        let b = uniform_matrix(&mut rng, d);
        let skew = a.add(&a.transpose().scaled(-1.0)).scaled(0.5);
        b.transpose().mul(&b).add(&skew)
    } else {
        a
    };
    let norm = raw.norm_1().max(raw.norm_inf());
    // The margin keeps the rescaled norms at or below one after rounding.
    let scale = if norm > 1.0 { norm * (1.0 + 4.0 * f64::EPSILON) } else { 1.0 };
    let matrix = raw.scaled(1.0 / scale);
    let c = (0..d).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    LinearVi::new(matrix, c, rho)
}
