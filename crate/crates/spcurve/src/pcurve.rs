//! Geodesic polylines and the principal-curve fitting loop.
//!
//! A curve is an ordered set of vertices joined by geodesic segments,
//! parameterized at unit speed by λ ∈ [0, 1]. Fitting alternates a
//! kernel-weighted expectation step (extrinsic mean, intrinsic mean, or
//! geometric median per vertex) with exact continuous projection of the
//! data onto the polyline; the nearest-vertex projection is kept as the
//! baseline it is compared against.

use crate::error::{Error, Result};
use crate::geom::{self, UnitVec3, ANTIPODAL_GAP};
use crate::stats::{self, IterationConfig, WeightedSample};
use crate::circlefit::Circle;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// An ordered polyline of unit-speed geodesic segments on the sphere.
///
/// `lambdas[t]` is the cumulative geodesic arc length up to vertex `t`
/// divided by the total length; for closed curves the wrap segment from the
/// last vertex back to the first completes the length.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Curve {
    vertices: Vec<UnitVec3>,
    closed: bool,
    lambdas: Vec<f64>,
    total_length: f64,
}

impl Curve {
    pub fn vertices(&self) -> &[UnitVec3] {
        &self.vertices
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    pub fn lambdas(&self) -> &[f64] {
        &self.lambdas
    }

    pub fn total_length(&self) -> f64 {
        self.total_length
    }

    /// Number of geodesic segments, including the wrap segment when closed.
    pub fn segment_count(&self) -> usize {
        if self.closed {
            self.vertices.len()
        } else {
            self.vertices.len() - 1
        }
    }

    /// Endpoints of segment `s`.
    pub fn segment(&self, s: usize) -> (&UnitVec3, &UnitVec3) {
        let t = self.vertices.len();
        (&self.vertices[s], &self.vertices[(s + 1) % t])
    }

    /// λ of the start of segment `s` and the segment's share of λ.
    fn segment_lambda_span(&self, s: usize) -> (f64, f64) {
        let start = self.lambdas[s];
        let end = if s + 1 < self.lambdas.len() {
            self.lambdas[s + 1]
        } else {
            1.0
        };
        (start, end - start)
    }

    /// The curve point at parameter `lambda`; closed curves wrap λ mod 1.
    pub fn point_at(&self, lambda: f64) -> Result<UnitVec3> {
        let lam = if self.closed {
            lambda.rem_euclid(1.0)
        } else {
            lambda.clamp(0.0, 1.0)
        };
        // Find the segment whose λ span contains lam.
        let s = match self
            .lambdas
            .binary_search_by(|probe| probe.partial_cmp(&lam).unwrap())
        {
            Ok(idx) => idx.min(self.segment_count().saturating_sub(1)),
            Err(idx) => idx.saturating_sub(1),
        };
        let s = s.min(self.segment_count() - 1);
        let (start, span) = self.segment_lambda_span(s);
        let t = if span > 0.0 { (lam - start) / span } else { 0.0 };
        let (a, b) = self.segment(s);
        geom::geodesic_point(a, b, t.clamp(0.0, 1.0))
    }
}

/// Projection of one data point onto a curve.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct ProjectionResult {
    /// Projection index λ_f(x) in [0, 1].
    pub lambda: f64,
    /// Foot point f(λ_f(x)).
    pub foot: UnitVec3,
    /// Geodesic distance from the data point to the foot.
    pub distance: f64,
    /// Index of the geodesic segment containing the foot.
    pub segment: usize,
    /// Set when every point of some segment was equidistant from the data
    /// point (the point sits on a pole of that segment's great circle).
    pub ambiguous: bool,
}

/// Which estimator the expectation step uses per vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MeanKind {
    Extrinsic,
    Intrinsic,
    Median,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CurveFitConfig {
    /// Number of initial vertices (the initializer decides the actual count).
    pub t_vertices: usize,
    /// Kernel bandwidth as a fraction of curve length: weights are
    /// `k(Δλ / q)` in normalized λ units.
    pub q: f64,
    pub mean_kind: MeanKind,
    /// Minimum relative decrease of δ to keep iterating.
    pub threshold: f64,
    pub max_iter: usize,
    pub closed: bool,
    /// Replace continuous projection with the nearest-vertex rule
    /// throughout (the baseline).
    pub hauberg_projection: bool,
    /// Iteration controls for the intrinsic-mean / median expectation.
    pub estimator: IterationConfig,
}

impl Default for CurveFitConfig {
    fn default() -> Self {
        Self {
            t_vertices: 100,
            q: 0.05,
            mean_kind: MeanKind::Extrinsic,
            threshold: 1e-4,
            max_iter: 50,
            closed: true,
            hauberg_projection: false,
            estimator: IterationConfig {
                tol: 1e-6,
                max_iter: 500,
                ..Default::default()
            },
        }
    }
}

impl CurveFitConfig {
    fn validate(&self) -> Result<()> {
        if self.t_vertices < 2 {
            return Err(Error::DegenerateInput("need at least 2 vertices".into()));
        }
        if !(self.q > 0.0) {
            return Err(Error::DegenerateInput("q must be positive".into()));
        }
        if !(self.threshold > 0.0) {
            return Err(Error::DegenerateInput("threshold must be positive".into()));
        }
        if self.max_iter < 1 {
            return Err(Error::DegenerateInput("max_iter must be at least 1".into()));
        }
        Ok(())
    }
}

/// Everything a fit produced: the curve, the final projections, and the
/// per-iteration reconstruction errors δ.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitReport {
    pub final_curve: Curve,
    pub projections: Vec<ProjectionResult>,
    /// δ after the initial projection and after each iteration.
    pub delta_history: Vec<f64>,
    /// Iterations performed (excluding the initial projection).
    pub iterations: usize,
    pub converged: bool,
    /// Distinct foot points at tolerance 1e-6 rad.
    pub distinct_projections: usize,
    /// Set when the curve degenerated mid-fit and the loop stopped early;
    /// the report still carries the last valid state.
    pub aborted: Option<String>,
}

/// Builds a unit-speed curve from vertices, merging coincident consecutive
/// vertices (closer than 1e-12). Consecutive vertices must not be
/// antipodal. Errors when everything collapses to a single point.
pub fn reparameterize_unit_speed(vertices: &[UnitVec3], closed: bool) -> Result<Curve> {
    let mut kept: Vec<UnitVec3> = Vec::with_capacity(vertices.len());
    for v in vertices {
        if let Some(last) = kept.last() {
            if geom::geodesic_distance(last, v) < 1e-12 {
                continue;
            }
        }
        kept.push(*v);
    }
    if closed {
        while kept.len() > 1 {
            let d = geom::geodesic_distance(kept.last().unwrap(), &kept[0]);
            if d < 1e-12 {
                kept.pop();
            } else {
                break;
            }
        }
    }
    if kept.len() < 2 {
        return Err(Error::DegenerateCurve);
    }

    let seg_count = if closed { kept.len() } else { kept.len() - 1 };
    let mut lengths = Vec::with_capacity(seg_count);
    for s in 0..seg_count {
        let a = &kept[s];
        let b = &kept[(s + 1) % kept.len()];
        let d = geom::geodesic_distance(a, b);
        if d >= PI - ANTIPODAL_GAP {
            return Err(Error::AmbiguousGeodesic);
        }
        lengths.push(d);
    }
    let total: f64 = lengths.iter().sum();
    if total < 1e-12 {
        return Err(Error::DegenerateCurve);
    }
    let mut lambdas = Vec::with_capacity(kept.len());
    let mut acc = 0.0;
    lambdas.push(0.0);
    for s in 0..kept.len() - 1 {
        acc += lengths[s];
        lambdas.push(acc / total);
    }
    if !closed {
        // Pin the endpoint exactly.
        *lambdas.last_mut().unwrap() = 1.0;
    }
    Ok(Curve {
        vertices: kept,
        closed,
        lambdas,
        total_length: total,
    })
}

/// Samples `t_count` vertices equally spaced in azimuth around a circle's
/// axis, as a closed curve.
pub fn sample_circle_vertices(c: &Circle, t_count: usize) -> Result<Curve> {
    if t_count < 3 {
        return Err(Error::DegenerateInput(format!(
            "need at least 3 vertices to sample a circle, got {t_count}"
        )));
    }
    if !(c.radius > 0.0 && c.radius < PI) {
        return Err(Error::DegenerateInput(format!(
            "circle radius {} outside (0, pi)",
            c.radius
        )));
    }
    let (e1, e2) = geom::tangent_basis(&c.center);
    let (sr, cr) = c.radius.sin_cos();
    let vertices: Vec<UnitVec3> = (0..t_count)
        .map(|k| {
            let phi = 2.0 * PI * k as f64 / t_count as f64;
            let (sp, cp) = phi.sin_cos();
            UnitVec3::new(
                cr * c.center.x + sr * (cp * e1.x + sp * e2.x),
                cr * c.center.y + sr * (cp * e1.y + sp * e2.y),
                cr * c.center.z + sr * (cp * e1.z + sp * e2.z),
            )
            .expect("circle sample is a unit vector")
        })
        .collect();
    reparameterize_unit_speed(&vertices, true)
}

/// Outcome of projecting onto a single geodesic segment.
struct SegmentProjection {
    foot: UnitVec3,
    distance: f64,
    t: f64,
    ambiguous: bool,
}

/// Projects `p` onto the geodesic segment from `a` to `b` by the rotation
/// construction: rotate `a` to the north pole, rotate the segment's
/// great-circle pole (azimuth + π/2) to the north pole so the segment lies
/// on the equator, drop the azimuth of the rotated point onto the equator,
/// clamp to the segment's azimuth span, and un-rotate.
///
/// When `p` lies on a pole of the segment's great circle every segment
/// point is equidistant; the start point is returned with `ambiguous` set.
pub fn project_to_segment(
    p: &UnitVec3,
    a: &UnitVec3,
    b: &UnitVec3,
) -> Result<(UnitVec3, f64, f64)> {
    let sp = project_to_segment_inner(p, a, b)?;
    Ok((sp.foot, sp.distance, sp.t))
}

fn project_to_segment_inner(p: &UnitVec3, a: &UnitVec3, b: &UnitVec3) -> Result<SegmentProjection> {
    let gap = geom::geodesic_distance(a, b);
    if gap >= PI - ANTIPODAL_GAP {
        return Err(Error::AmbiguousGeodesic);
    }
    if gap < 1e-15 {
        return Err(Error::DegenerateInput(
            "segment endpoints coincide".into(),
        ));
    }

    let north = UnitVec3::north();
    let r1 = geom::rotation_taking(a, &north);
    let b1 = r1.apply(b);
    let p1 = r1.apply(p);

    // The great circle through the north pole and b1 has its pole on the
    // equator at the azimuth of b1 plus π/2.
    let az_b = b1.y.atan2(b1.x);
    let pole = UnitVec3::new((az_b + PI / 2.0).cos(), (az_b + PI / 2.0).sin(), 0.0)
        .expect("equatorial pole");
    let r2 = geom::rotation_taking(&pole, &north);
    let a2 = r2.apply(&r1.apply(a));
    let b2 = r2.apply(&b1);
    let p2 = r2.apply(&p1);

    if p2.z.abs() >= 1.0 - 1e-12 {
        // Every point of the segment's great circle is equidistant from p.
        return Ok(SegmentProjection {
            foot: *a,
            distance: geom::geodesic_distance(p, a),
            t: 0.0,
            ambiguous: true,
        });
    }

    let az_a = a2.y.atan2(a2.x);
    let az_b = b2.y.atan2(b2.x);
    let az_p = p2.y.atan2(p2.x);
    let span = wrap_angle(az_b - az_a);
    let offset = wrap_angle(az_p - az_a);

    let inside = if span >= 0.0 {
        (0.0..=span).contains(&offset)
    } else {
        (span..=0.0).contains(&offset)
    };

    if inside {
        let foot2 = UnitVec3::new(az_p.cos(), az_p.sin(), 0.0).expect("equator point");
        let foot = r1.transpose().apply(&r2.transpose().apply(&foot2));
        let t = if span != 0.0 { offset / span } else { 0.0 };
        Ok(SegmentProjection {
            foot,
            distance: geom::geodesic_distance(p, &foot),
            t: t.clamp(0.0, 1.0),
            ambiguous: false,
        })
    } else {
        let da = geom::geodesic_distance(p, a);
        let db = geom::geodesic_distance(p, b);
        if da <= db {
            Ok(SegmentProjection {
                foot: *a,
                distance: da,
                t: 0.0,
                ambiguous: false,
            })
        } else {
            Ok(SegmentProjection {
                foot: *b,
                distance: db,
                t: 1.0,
                ambiguous: false,
            })
        }
    }
}

/// Wraps an angle into (-π, π].
fn wrap_angle(a: f64) -> f64 {
    let mut a = a.rem_euclid(2.0 * PI);
    if a > PI {
        a -= 2.0 * PI;
    }
    a
}

/// Continuous projection of `p` onto the whole curve: each segment is
/// tried and the global minimum kept; distance ties keep the smaller λ.
pub fn project_to_curve(p: &UnitVec3, f: &Curve) -> Result<ProjectionResult> {
    let mut best: Option<ProjectionResult> = None;
    for s in 0..f.segment_count() {
        let (a, b) = f.segment(s);
        let sp = project_to_segment_inner(p, a, b)?;
        let (start, span) = f.segment_lambda_span(s);
        let lambda = start + sp.t * span;
        let candidate = ProjectionResult {
            lambda,
            foot: sp.foot,
            distance: sp.distance,
            segment: s,
            ambiguous: sp.ambiguous,
        };
        let better = match &best {
            None => true,
            Some(cur) => {
                sp.distance < cur.distance
                    || (sp.distance == cur.distance && lambda < cur.lambda)
            }
        };
        if better {
            // Keep the ambiguity flag sticky across equal-distance segments.
            let ambiguous = candidate.ambiguous
                || best.as_ref().is_some_and(|cur| {
                    cur.ambiguous && cur.distance == candidate.distance
                });
            best = Some(ProjectionResult {
                ambiguous,
                ..candidate
            });
        }
    }
    best.ok_or(Error::DegenerateCurve)
}

/// Nearest-vertex projection: the foot is always a curve vertex; distance
/// ties keep the smallest vertex index.
pub fn hauberg_project(p: &UnitVec3, f: &Curve) -> Result<ProjectionResult> {
    let mut best_idx = 0;
    let mut best_dist = f64::INFINITY;
    for (i, v) in f.vertices().iter().enumerate() {
        let d = geom::geodesic_distance(p, v);
        if d < best_dist {
            best_dist = d;
            best_idx = i;
        }
    }
    let segment = best_idx.min(f.segment_count() - 1);
    Ok(ProjectionResult {
        lambda: f.lambdas()[best_idx],
        foot: f.vertices()[best_idx],
        distance: best_dist,
        segment,
        ambiguous: false,
    })
}

/// Quadratic kernel `k(x) = (1 - x²)²` on |x| ≤ 1, zero outside.
pub fn quadratic_kernel(x: f64) -> f64 {
    let a = x.abs();
    if a > 1.0 {
        0.0
    } else {
        let s = 1.0 - a * a;
        s * s
    }
}

/// T×n kernel weights: `w[t][i] = k(Δ(λ_t, λ_i) / q)` where Δ is the plain
/// λ gap for open curves and the circular gap `min(|Δ|, 1 - |Δ|)` for
/// closed curves.
pub fn smoother_weights(f: &Curve, lambdas_data: &[f64], q: f64) -> Vec<Vec<f64>> {
    f.lambdas()
        .iter()
        .map(|lt| {
            lambdas_data
                .iter()
                .map(|li| {
                    let gap = (lt - li).abs();
                    let gap = if f.is_closed() {
                        gap.min(1.0 - gap)
                    } else {
                        gap
                    };
                    quadratic_kernel(gap / q)
                })
                .collect()
        })
        .collect()
}

/// One expectation step: each vertex is replaced by the weighted estimator
/// of the data under its weight row. Rows with zero total weight (or a
/// degenerate estimator) keep the old vertex; the returned flags mark them.
pub fn expectation_step(
    data: &[UnitVec3],
    f: &Curve,
    weights: &[Vec<f64>],
    mean_kind: MeanKind,
    estimator_cfg: &IterationConfig,
) -> (Vec<UnitVec3>, Vec<bool>) {
    let mut vertices = Vec::with_capacity(f.vertices().len());
    let mut kept_old = Vec::with_capacity(f.vertices().len());
    for (t, row) in weights.iter().enumerate() {
        let mut pts = Vec::new();
        let mut ws = Vec::new();
        for (x, &w) in data.iter().zip(row) {
            if w > 0.0 {
                pts.push(*x);
                ws.push(w);
            }
        }
        let old = f.vertices()[t];
        let updated = if pts.is_empty() {
            None
        } else {
            WeightedSample::new(pts, ws).ok().and_then(|s| {
                match mean_kind {
                    MeanKind::Extrinsic => stats::extrinsic_mean(&s).ok(),
                    MeanKind::Intrinsic => {
                        stats::intrinsic_mean(&s, estimator_cfg).ok().map(|r| r.point)
                    }
                    MeanKind::Median => {
                        stats::geometric_median(&s, estimator_cfg).ok().map(|r| r.point)
                    }
                }
            })
        };
        match updated {
            Some(v) => {
                vertices.push(v);
                kept_old.push(false);
            }
            None => {
                vertices.push(old);
                kept_old.push(true);
            }
        }
    }
    (vertices, kept_old)
}

fn project_all(
    data: &[UnitVec3],
    f: &Curve,
    hauberg: bool,
) -> Result<Vec<ProjectionResult>> {
    data.par_iter()
        .map(|p| {
            if hauberg {
                hauberg_project(p, f)
            } else {
                project_to_curve(p, f)
            }
        })
        .collect()
}

fn delta_of(projections: &[ProjectionResult]) -> f64 {
    projections.iter().map(|p| p.distance * p.distance).sum()
}

/// Fits a principal curve from an initial curve by iterating
/// expectation → reparameterization → projection until the relative
/// decrease of δ falls below `cfg.threshold` or `cfg.max_iter` is reached.
pub fn fit(data: &[UnitVec3], init: &Curve, cfg: &CurveFitConfig) -> Result<FitReport> {
    cfg.validate()?;
    if data.is_empty() {
        return Err(Error::DegenerateInput("no data points".into()));
    }

    let mut curve = reparameterize_unit_speed(init.vertices(), init.is_closed())?;
    let mut projections = project_all(data, &curve, cfg.hauberg_projection)?;
    let mut delta = delta_of(&projections);
    let mut history = vec![delta];
    let mut converged = false;
    let mut aborted = None;
    let mut iterations = 0;

    for _ in 0..cfg.max_iter {
        let lambdas_data: Vec<f64> = projections.iter().map(|p| p.lambda).collect();
        let weights = smoother_weights(&curve, &lambdas_data, cfg.q);
        let (vertices, _kept) =
            expectation_step(data, &curve, &weights, cfg.mean_kind, &cfg.estimator);
        let next_curve = match reparameterize_unit_speed(&vertices, curve.is_closed()) {
            Ok(c) => c,
            Err(e) => {
                aborted = Some(e.to_string());
                break;
            }
        };
        let next_projections = project_all(data, &next_curve, cfg.hauberg_projection)?;
        let next_delta = delta_of(&next_projections);

        curve = next_curve;
        projections = next_projections;
        iterations += 1;
        history.push(next_delta);

        let decrease = delta - next_delta;
        delta = next_delta;
        if decrease < cfg.threshold * history[history.len() - 2].max(1e-300) || delta <= 1e-15 {
            converged = true;
            break;
        }
    }

    let distinct = crate::eval::distinct_projection_count(&projections, 1e-6);
    Ok(FitReport {
        final_curve: curve,
        projections,
        delta_history: history,
        iterations,
        converged,
        distinct_projections: distinct,
        aborted,
    })
}
