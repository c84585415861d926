//! Sperner-based solver for quasi-variational inequalities.
//!
//! Each vertex `v` of a uniform grid on `[0,1]^d` gets the proximal selector
//! output `p(v) = Π_{Q_γ(v)}(v − F(v)/η)` and a color derived from the
//! displacement `p(v) − v`. Cubelets are split into Kuhn simplices and
//! scanned in lexicographic order for one carrying all `d + 1` colors; its
//! color-0 vertex is the candidate, verified with the LP-based QVI check.

mod selector;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::model::{Certificate, QviInstance};
use crate::verify::verify_qvi;

pub use selector::{minimal_relaxation, proximal_selector, EmptySlicePolicy, Selection};

/// Upper bound on `d!·N^d` simplices scanned.
pub const SCAN_BUDGET: f64 = 1e8;

/// Grid of `count^d` cubelets of side `μ = 1/count`; vertices are integer
/// coordinates in `0..=count`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpernerGrid {
    pub dim: usize,
    pub count: usize,
}

impl SpernerGrid {
    pub fn new(dim: usize, count: usize) -> Result<Self> {
        if dim == 0 || count == 0 {
            return Err(Error::InvalidParameter("grid needs d ≥ 1 and at least one cubelet".into()));
        }
        Ok(SpernerGrid { dim, count })
    }

    pub fn mu(&self) -> f64 {
        1.0 / self.count as f64
    }

    pub fn num_vertices(&self) -> usize {
        (self.count + 1).pow(self.dim as u32)
    }

    pub fn num_simplices(&self) -> f64 {
        factorial(self.dim) as f64 * (self.count as f64).powi(self.dim as i32)
    }

    /// Lexicographic index, first coordinate most significant.
    pub fn index(&self, v: &[usize]) -> usize {
        v.iter().fold(0, |acc, &k| acc * (self.count + 1) + k)
    }

    pub fn coords(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim];
        for v in out.iter_mut().rev() {
            *v = idx % (self.count + 1);
            idx /= self.count + 1;
        }
        out
    }

    pub fn point(&self, v: &[usize]) -> Vec<f64> {
        v.iter().map(|&k| k as f64 / self.count as f64).collect()
    }

    fn cubelet(&self, mut idx: usize) -> Vec<usize> {
        let mut out = vec![0; self.dim];
        for v in out.iter_mut().rev() {
            *v = idx % self.count;
            idx /= self.count;
        }
        out
    }

    fn num_cubelets(&self) -> usize {
        self.count.pow(self.dim as u32)
    }
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

/// Permutations of `0..d` in lexicographic order.
fn permutations(d: usize) -> Vec<Vec<usize>> {
    let mut p: Vec<usize> = (0..d).collect();
    let mut out = vec![p.clone()];
    loop {
        let Some(i) = (1..d).rev().find(|&i| p[i - 1] < p[i]) else { return out };
        let j = (i..d).rev().find(|&j| p[j] > p[i - 1]).expect("successor exists");
        p.swap(i - 1, j);
        p[i..].reverse();
        out.push(p.clone());
    }
}

fn simplex_at(base: &[usize], perm: &[usize]) -> Vec<Vec<usize>> {
    let mut v = base.to_vec();
    let mut out = vec![v.clone()];
    for &k in perm {
        v[k] += 1;
        out.push(v.clone());
    }
    out
}

/// All Kuhn simplices: for each cubelet in lexicographic order, the base
/// vertex followed by unit steps along each permutation of the axes.
pub fn kuhn_simplices(grid: SpernerGrid) -> impl Iterator<Item = Vec<Vec<usize>>> {
    let perms = permutations(grid.dim);
    (0..grid.num_cubelets()).flat_map(move |c| {
        let base = grid.cubelet(c);
        perms.iter().map(|p| simplex_at(&base, p)).collect::<Vec<_>>()
    })
}

/// Color of vertex `v` with selector output `p`: `0` when no displacement
/// component is negative and no coordinate of `v` equals 1, otherwise
/// `i + 1` for the smallest `i` with `p_i ≤ v_i` and `v_i > 0`.
///
/// Vertices with `v_i = 0` never get color `i + 1` and vertices on a face
/// `v_i = 1` never get color 0.
pub fn sperner_color(v: &[f64], p: &[f64]) -> usize {
    let on_top = v.iter().any(|x| *x >= 1.0);
    if !on_top && p.iter().zip(v).all(|(a, b)| a - b >= 0.0) {
        return 0;
    }
    p.iter()
        .zip(v)
        .position(|(a, b)| a - b <= 0.0 && *b > 0.0)
        .map(|i| i + 1)
        .expect("a coordinate with non-positive displacement and positive value exists")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpernerOptions {
    /// Cubelets per axis.
    pub grid: usize,
    pub eta: f64,
    pub gamma: f64,
    #[serde(default)]
    pub empty_slice: EmptySlicePolicy,
}

impl SpernerOptions {
    pub fn new(grid: usize, eta: f64, gamma: f64) -> Self {
        SpernerOptions { grid, eta, gamma, empty_slice: EmptySlicePolicy::default() }
    }
}

/// `(η, γ, μ)` together with the correspondence's Lipschitz bound `L` and
/// the dimension, from which `ℓ`, `κ` and `ω` are derived.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpernerSolverParams {
    pub dim: usize,
    pub lipschitz: f64,
    pub eta: f64,
    pub gamma: f64,
    pub mu: f64,
}

impl SpernerSolverParams {
    /// `ℓ = 2dμ(4L√d/γ + L + η)`.
    pub fn ell(&self) -> f64 {
        let d = self.dim as f64;
        2.0 * d * self.mu * (4.0 * self.lipschitz * d.sqrt() / self.gamma + self.lipschitz + self.eta)
    }

    /// `κ = 2Ldμ/γ`.
    pub fn kappa(&self) -> f64 {
        2.0 * self.lipschitz * self.dim as f64 * self.mu / self.gamma
    }

    /// `ω = √d(μ + κ + √(2ℓ/η))`.
    pub fn omega(&self) -> f64 {
        (self.dim as f64).sqrt() * (self.mu + self.kappa() + (2.0 * self.ell() / self.eta).sqrt())
    }

    /// Bound on `‖p(v⁰) − p(vⁱ)‖` within one simplex: `κ + √(2ℓ/η)`.
    pub fn selector_spread(&self) -> f64 {
        self.kappa() + (2.0 * self.ell() / self.eta).sqrt()
    }
}

/// Parameters from the worst-case analysis, with the two inequalities it
/// relies on evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReferenceParams {
    pub params: SpernerSolverParams,
    /// `γ + √d·ω`, to be compared with `ν`.
    pub relaxation_lhs: f64,
    /// `(η/2)ω² + √d(1+η)ω + d√d·ω/γ`, to be compared with `ε`.
    pub accuracy_lhs: f64,
    pub eps: f64,
    pub nu: f64,
    /// Cubelets per axis, `1/μ`.
    pub grid_count: f64,
    /// Whether `d!·(1/μ)^d` fits the scan budget.
    pub tractable: bool,
}

impl ReferenceParams {
    pub fn relaxation_holds(&self) -> bool {
        self.relaxation_lhs <= self.nu
    }

    pub fn accuracy_holds(&self) -> bool {
        self.accuracy_lhs <= self.eps
    }
}

/// `η` is the minimum of `1, L, d^{1/4}, √(ν/2), √(2dL), L^{−1/8},
/// 1/(8d²√(2L)), 1/(2(d√(2dL))^{1/3}), ε/(24d³√(2dL))`; then `μ = η⁹`,
/// `γ = η²`.
pub fn reference_params(d: usize, eps: f64, nu: f64, l: f64) -> Result<ReferenceParams> {
    if !(eps > 0.0 && nu > 0.0 && l > 0.0) || d == 0 {
        return Err(Error::InvalidParameter("reference parameters need d ≥ 1 and ε, ν, L > 0".into()));
    }
    let df = d as f64;
    let r = (2.0 * df * l).sqrt();
    let eta = [
        1.0,
        l,
        df.powf(0.25),
        (nu / 2.0).sqrt(),
        r,
        l.powf(-0.125),
        1.0 / (8.0 * df * df * (2.0 * l).sqrt()),
        1.0 / (2.0 * (df * r).cbrt()),
        eps / (24.0 * df.powi(3) * r),
    ]
    .into_iter()
    .fold(f64::INFINITY, f64::min);
    let params = SpernerSolverParams { dim: d, lipschitz: l, eta, gamma: eta * eta, mu: eta.powi(9) };
    let omega = params.omega();
    let sd = df.sqrt();
    let grid_count = 1.0 / params.mu;
    Ok(ReferenceParams {
        params,
        relaxation_lhs: params.gamma + sd * omega,
        accuracy_lhs: eta / 2.0 * omega * omega + sd * (1.0 + eta) * omega + df * sd * omega / params.gamma,
        eps,
        nu,
        grid_count,
        tractable: factorial(d) as f64 * grid_count.powi(d as i32) <= SCAN_BUDGET,
    })
}

/// A simplex carrying all colors, with the selector data at its vertices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Panchromatic {
    pub grid: SpernerGrid,
    /// Integer vertex coordinates, in simplex order.
    pub vertices: Vec<Vec<usize>>,
    pub colors: Vec<usize>,
    pub points: Vec<Vec<f64>>,
    pub selections: Vec<Vec<f64>>,
    /// Relaxation used at each vertex (above `γ` only where `Q_γ` was empty).
    pub relaxations: Vec<f64>,
    /// Vertices of the whole grid whose `Q_γ` value was empty.
    pub relaxed_vertices: usize,
}

impl Panchromatic {
    /// Index within the simplex of the color-0 vertex.
    pub fn zero_vertex(&self) -> usize {
        self.colors.iter().position(|c| *c == 0).expect("panchromatic simplex has color 0")
    }
}

struct Coloring {
    colors: Vec<u8>,
    selections: Vec<Selection>,
}

fn color_grid(qvi: &QviInstance, grid: SpernerGrid, opts: &SpernerOptions) -> Result<Coloring> {
    let results: Vec<Result<(u8, Selection)>> = (0..grid.num_vertices())
        .into_par_iter()
        .map(|idx| {
            let v = grid.point(&grid.coords(idx));
            let s = selector::select(qvi, &v, opts.gamma, opts.eta, opts.empty_slice)?;
            Ok((sperner_color(&v, &s.point) as u8, s))
        })
        .collect();
    let mut colors = Vec::with_capacity(results.len());
    let mut selections = Vec::with_capacity(results.len());
    for r in results {
        let (c, s) = r?;
        colors.push(c);
        selections.push(s);
    }
    Ok(Coloring { colors, selections })
}

fn check_options(qvi: &QviInstance, opts: &SpernerOptions) -> Result<SpernerGrid> {
    if !(opts.eta > 0.0) || !(opts.gamma >= 0.0) {
        return Err(Error::InvalidParameter("need η > 0 and γ ≥ 0".into()));
    }
    let grid = SpernerGrid::new(qvi.dim(), opts.grid)?;
    if grid.num_simplices() > SCAN_BUDGET {
        return Err(Error::BudgetExceeded { required: grid.num_simplices(), budget: SCAN_BUDGET });
    }
    Ok(grid)
}

/// First panchromatic simplex in lexicographic scan order.
pub fn find_panchromatic(qvi: &QviInstance, opts: &SpernerOptions) -> Result<Panchromatic> {
    let grid = check_options(qvi, opts)?;
    let coloring = color_grid(qvi, grid, opts)?;
    let d = grid.dim;
    let perms = permutations(d);
    let hit = (0..grid.num_cubelets()).into_par_iter().find_map_first(|c| {
        let base = grid.cubelet(c);
        perms.iter().find_map(|p| {
            let verts = simplex_at(&base, p);
            let mut seen = vec![false; d + 1];
            for v in &verts {
                seen[coloring.colors[grid.index(v)] as usize] = true;
            }
            seen.iter().all(|s| *s).then_some(verts)
        })
    });
    let vertices = hit.ok_or_else(|| {
        Error::Unsupported("no panchromatic simplex found; the coloring violates the boundary rules".into())
    })?;
    let ids: Vec<usize> = vertices.iter().map(|v| grid.index(v)).collect();
    Ok(Panchromatic {
        grid,
        colors: ids.iter().map(|&i| coloring.colors[i] as usize).collect(),
        points: vertices.iter().map(|v| grid.point(v)).collect(),
        selections: ids.iter().map(|&i| coloring.selections[i].point.clone()).collect(),
        relaxations: ids.iter().map(|&i| coloring.selections[i].relaxation).collect(),
        relaxed_vertices: coloring.selections.iter().filter(|s| s.relaxation > opts.gamma).count(),
        vertices,
    })
}

/// Result of a Sperner run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SpernerRun {
    pub simplex: Panchromatic,
    pub params: SpernerSolverParams,
    /// LP-verified QVI certificate at the color-0 vertex.
    pub certificate: Certificate,
}

/// Finds a panchromatic simplex and verifies its color-0 vertex `v⁰` against
/// the QVI at the instance's own `ν` and `ε`.
///
/// The certificate also records the observed selector spread and
/// displacement next to the bounds `κ + √(2ℓ/η)` and `ω` computed from the
/// run's parameters.
pub fn solve_qvi(qvi: &QviInstance, opts: &SpernerOptions) -> Result<SpernerRun> {
    let simplex = find_panchromatic(qvi, opts)?;
    let params = SpernerSolverParams {
        dim: qvi.dim(),
        lipschitz: qvi.lipschitz,
        eta: opts.eta,
        gamma: opts.gamma,
        mu: simplex.grid.mu(),
    };
    let k = simplex.zero_vertex();
    let v0 = &simplex.points[k];
    let p0 = &simplex.selections[k];
    let spread = simplex.selections.iter().map(|p| linalg::dist(p, p0)).fold(0.0, f64::max);
    let displacement = linalg::dist(p0, v0);
    let certificate = verify_qvi(qvi, v0)?
        .with_detail("selector_spread", spread)
        .with_detail("selector_spread_bound", params.selector_spread())
        .with_detail("displacement", displacement)
        .with_detail("displacement_bound", params.omega())
        .with_detail("relaxed_vertices", simplex.relaxed_vertices as f64)
        .with_detail("grid", opts.grid as f64)
        .with_detail("eta", opts.eta)
        .with_detail("gamma", opts.gamma);
    Ok(SpernerRun { simplex, params, certificate })
}
