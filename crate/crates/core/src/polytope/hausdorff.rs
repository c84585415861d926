use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{project_polytope, BoxPolytope, ProjectionOptions};
use crate::error::Result;
use crate::linalg;

/// Lower estimate of `sup_{a ∈ Pa} dist(a, Pb)`.
///
/// Distance to a convex set is convex, so the supremum is attained at a
/// vertex of `Pa`; vertices are reached by minimising the coordinate
/// directions, their negatives and `samples` random directions (fixed seed).
pub fn one_sided_hausdorff(pa: &BoxPolytope, pb: &BoxPolytope, samples: usize) -> Result<f64> {
    let d = pa.dim();
    let opts = ProjectionOptions::default();
    let mut rng = ChaCha8Rng::seed_from_u64(0x4a75_6c69);
    let mut best: f64 = 0.0;
    let mut probe = |cost: &[f64]| -> Result<()> {
        let (v, _) = pa.lp_vertex(cost)?;
        let q = project_polytope(pb, &v, &opts)?;
        best = best.max(linalg::dist(&v, &q));
        Ok(())
    };
    for i in 0..d {
        for s in [1.0, -1.0] {
            let mut e = vec![0.0; d];
            e[i] = s;
            probe(&e)?;
        }
    }
    for _ in 0..samples {
        let dir: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        probe(&dir)?;
    }
    Ok(best)
}

/// Symmetric version of [`one_sided_hausdorff`].
pub fn hausdorff(pa: &BoxPolytope, pb: &BoxPolytope, samples: usize) -> Result<f64> {
    Ok(one_sided_hausdorff(pa, pb, samples)?.max(one_sided_hausdorff(pb, pa, samples)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_sets() {
        let p = BoxPolytope::from_rows(2, vec![(vec![1.0, 1.0], 1.0)]);
        assert!(one_sided_hausdorff(&p, &p, 16).unwrap() < 1e-12);
    }

    #[test]
    fn half_box() {
        let pa = BoxPolytope::unit_box(2);
        let pb = BoxPolytope::interval_product(&[0.0, 0.0], &[0.5, 1.0]);
        assert!((one_sided_hausdorff(&pa, &pb, 8).unwrap() - 0.5).abs() < 1e-12);
        assert!(one_sided_hausdorff(&pb, &pa, 8).unwrap() < 1e-12);
    }
}
