//! Shared helpers for unit tests.

use crate::geom::{exp_map, Tangent2, UnitVec3};
use rand::Rng;

/// Uniformly distributed point on the sphere (rejection sampling).
pub fn random_unit(rng: &mut impl Rng) -> UnitVec3 {
    loop {
        let x: f64 = rng.gen_range(-1.0..1.0);
        let y: f64 = rng.gen_range(-1.0..1.0);
        let z: f64 = rng.gen_range(-1.0..1.0);
        let n2 = x * x + y * y + z * z;
        if n2 > 1e-4 && n2 < 1.0 {
            return UnitVec3::new(x, y, z).unwrap();
        }
    }
}

/// Point drawn from a cap of the given geodesic radius around `center`,
/// area-uniform in the tangent disk.
pub fn random_in_cap(rng: &mut impl Rng, center: &UnitVec3, radius: f64) -> UnitVec3 {
    let r = radius * rng.gen_range(0.0..1.0f64).sqrt();
    let phi = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
    exp_map(
        center,
        &Tangent2 {
            u: r * phi.cos(),
            v: r * phi.sin(),
        },
    )
    .unwrap()
}

/// Brute-force minimum distance from `p` to a curve over roughly
/// `samples` points distributed along the segments proportionally to arc
/// length, with every segment endpoint included. Returns (distance, λ).
pub fn dense_min_distance(
    p: &UnitVec3,
    curve: &crate::pcurve::Curve,
    samples: usize,
) -> (f64, f64) {
    let total = curve.total_length();
    let mut best = f64::INFINITY;
    let mut best_lambda = 0.0;
    for s in 0..curve.segment_count() {
        let (a, b) = curve.segment(s);
        let seg_len = crate::geom::geodesic_distance(a, b);
        let m = ((samples as f64 * seg_len / total).ceil() as usize).max(2);
        let lam_start = curve.lambdas()[s];
        let lam_span = seg_len / total;
        for j in 0..=m {
            let t = j as f64 / m as f64;
            let q = crate::geom::geodesic_point(a, b, t).unwrap();
            let d = crate::geom::geodesic_distance(p, &q);
            if d < best {
                best = d;
                best_lambda = lam_start + t * lam_span;
            }
        }
    }
    (best, best_lambda)
}
