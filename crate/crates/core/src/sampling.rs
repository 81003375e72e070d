//! Seeded random configurations shared by the scans, the CLI and the tests.

use rand::Rng;

use crate::base_manifold::{ChartPoint, ChartedManifold, Vector};
use crate::bundle_metric::TangentPoint;

/// Components uniform in `[-1, 1)`.
pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, m: usize) -> Vector {
    Vector::from_fn(m, |_, _| rng.random_range(-1.0..1.0))
}

/// A tangent vector at `x` with `g`-norm exactly `norm` in a random direction.
pub fn random_tangent_vector<R: Rng + ?Sized>(
    rng: &mut R,
    man: &ChartedManifold,
    x: &ChartPoint,
    norm: f64,
) -> Vector {
    let g = man
        .metric_at(x)
        .expect("sample points are admitted by construction");
    loop {
        let d = random_vector(rng, man.dim());
        let n2 = d.dot(&(&g * &d));
        if n2 > 1e-6 {
            return d * (norm / n2.sqrt());
        }
    }
}

/// Random point of the sample box with `|u|_g` uniform in `[0, max_norm]`.
pub fn random_tangent_point<R: Rng + ?Sized>(
    man: &ChartedManifold,
    rng: &mut R,
    max_norm: f64,
) -> TangentPoint {
    let x = man.sample_point(rng);
    let norm = rng.random_range(0.0..=max_norm);
    tangent_point_with_norm(man, rng, x, norm)
}

/// Tangent point at `x` with `|u|_g = norm`.
pub fn tangent_point_with_norm<R: Rng + ?Sized>(
    man: &ChartedManifold,
    rng: &mut R,
    x: ChartPoint,
    norm: f64,
) -> TangentPoint {
    let u = random_tangent_vector(rng, man, &x, norm);
    TangentPoint::new(man, x, u).expect("sample points are admitted by construction")
}

/// Per-item seed derived from a run seed, independent of scheduling.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    // splitmix64 finaliser
    let mut z = seed ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
