//! Least-squares circle fitting on the sphere.
//!
//! [`fit_principal_circle`] runs gradient descent on the circle loss
//! parameterized by the center's spherical coordinates and the radius, with
//! no tangent-plane approximation. [`fit_pga_great_circle`] is the
//! tangent-plane baseline: PCA of the log-mapped data at the intrinsic mean,
//! which can only ever produce a great circle.

use crate::error::{Error, Result};
use crate::geom::{self, Rotation3, SphCoord, UnitVec3};
use crate::stats::{self, IterationConfig, WeightedSample};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// A circle on the sphere: the set of points at geodesic distance `radius`
/// from `center`. `radius = π/2` is a great circle.
///
/// `(center, r)` and `(-center, π - r)` denote the same point set; outputs
/// of the fitters are canonicalized to `r ≤ π/2`.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct Circle {
    pub center: UnitVec3,
    pub radius: f64,
}

impl Circle {
    pub fn new(center: UnitVec3, radius: f64) -> Result<Self> {
        if !(0.0..=PI).contains(&radius) {
            return Err(Error::DegenerateInput(format!(
                "circle radius {radius} outside [0, pi]"
            )));
        }
        Ok(Self { center, radius })
    }

    /// The equivalent representation with `radius ≤ π/2`.
    pub fn canonicalized(&self) -> Self {
        if self.radius > PI / 2.0 {
            Self {
                center: self.center.neg(),
                radius: PI - self.radius,
            }
        } else {
            *self
        }
    }
}

/// How the descent obtains the gradient of the circle loss.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GradientMode {
    /// Central finite differences, step 1e-6 per coordinate.
    #[default]
    FiniteDifference,
    /// Chain-rule gradient of the spherical-coordinate loss.
    Analytic,
}

#[derive(Debug, Clone, Copy)]
pub struct CircleFitConfig {
    /// Initial gradient step size; halved while a step fails to decrease
    /// the loss.
    pub step_beta: f64,
    /// Minimum absolute loss decrease to keep iterating.
    pub threshold: f64,
    pub max_iter: usize,
    pub gradient_mode: GradientMode,
}

impl Default for CircleFitConfig {
    fn default() -> Self {
        Self {
            step_beta: 0.01,
            threshold: 1e-6,
            max_iter: 5000,
            gradient_mode: GradientMode::FiniteDifference,
        }
    }
}

/// Sum of squared residuals `(d_geo(x, center) - r)²` over the data.
pub fn circle_loss(data: &[UnitVec3], c: &Circle) -> f64 {
    data.iter()
        .map(|x| {
            let d = geom::geodesic_distance(x, &c.center) - c.radius;
            d * d
        })
        .sum()
}

/// Distance between two points given in spherical coordinates, via the
/// spherical law of cosines with the pole as the third point.
fn dist_sph(c: &SphCoord, x: &SphCoord) -> f64 {
    (c.rho.cos() * x.rho.cos() + c.rho.sin() * x.rho.sin() * (c.theta - x.theta).cos())
        .clamp(-1.0, 1.0)
        .acos()
}

fn loss_sph(coords: &[SphCoord], theta_c: f64, rho_c: f64, r: f64) -> f64 {
    coords
        .iter()
        .map(|x| {
            let d = dist_sph(
                &SphCoord {
                    theta: theta_c,
                    rho: rho_c,
                },
                x,
            ) - r;
            d * d
        })
        .sum()
}

fn fd_gradient(coords: &[SphCoord], p: [f64; 3]) -> [f64; 3] {
    const H: f64 = 1e-6;
    let mut g = [0.0; 3];
    for k in 0..3 {
        let mut hi = p;
        let mut lo = p;
        hi[k] += H;
        lo[k] -= H;
        g[k] = (loss_sph(coords, hi[0], hi[1], hi[2]) - loss_sph(coords, lo[0], lo[1], lo[2]))
            / (2.0 * H);
    }
    g
}

fn analytic_gradient(coords: &[SphCoord], p: [f64; 3]) -> [f64; 3] {
    let [theta_c, rho_c, r] = p;
    let (st, ct) = (rho_c.sin(), rho_c.cos());
    let mut g = [0.0; 3];
    for x in coords {
        let (sx, cx) = (x.rho.sin(), x.rho.cos());
        let dt = theta_c - x.theta;
        let a = (ct * cx + st * sx * dt.cos()).clamp(-1.0, 1.0);
        let d = a.acos();
        let res = d - r;
        // d = arccos(a): d'(a) = -1/sqrt(1-a²), guarded at the endpoints.
        let root = (1.0 - a * a).sqrt().max(1e-9);
        let dd_dtheta = st * sx * dt.sin() / root;
        let dd_drho = -(-st * cx + ct * sx * dt.cos()) / root;
        g[0] += 2.0 * res * dd_dtheta;
        g[1] += 2.0 * res * dd_drho;
        g[2] += -2.0 * res;
    }
    g
}

/// Fits the least-squares circle by gradient descent on
/// `(θ_c, ρ_c, r)`, initialized at the intrinsic mean's spherical
/// coordinates and `r = π/2`.
///
/// Steps that fail to decrease the loss are retried with a halved step
/// size, so the loss never increases across accepted iterations; the
/// descent stops once no step achieves a decrease of at least
/// `threshold`. When the center drifts toward a coordinate pole
/// (`|sin ρ_c| < 1e-4`, where the azimuth degenerates) the frame is
/// re-centered by rotating the current center onto the equator, and the
/// accumulated rotation is undone on output.
pub fn fit_principal_circle(data: &[UnitVec3], cfg: &CircleFitConfig) -> Result<Circle> {
    if data.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "principal circle needs at least 3 points, got {}",
            data.len()
        )));
    }
    if !(cfg.step_beta > 0.0) || !(cfg.threshold > 0.0) || cfg.max_iter < 1 {
        return Err(Error::DegenerateInput(
            "circle fit config must have positive step, threshold, and max_iter".into(),
        ));
    }

    let sample = WeightedSample::unweighted(data.to_vec())?;
    let mean = stats::intrinsic_mean(&sample, &IterationConfig::default())?.point;

    // Cumulative frame rotation applied to the data; undone on output.
    let mut frame = Rotation3::identity();
    let mut points: Vec<UnitVec3> = data.to_vec();
    let mut coords: Vec<SphCoord> = points.iter().map(geom::to_spherical).collect();

    let init = geom::to_spherical(&mean);
    let mut params = [init.theta, init.rho, PI / 2.0];

    let recenter = |params: &mut [f64; 3],
                    frame: &mut Rotation3,
                    points: &mut Vec<UnitVec3>,
                    coords: &mut Vec<SphCoord>| {
        let center = geom::from_spherical(&SphCoord {
            theta: params[0],
            rho: params[1],
        });
        let rot = geom::rotation_taking(&center, &UnitVec3::x_axis());
        *frame = rot.compose(frame);
        for p in points.iter_mut() {
            *p = rot.apply(p);
        }
        *coords = points.iter().map(geom::to_spherical).collect();
        params[0] = 0.0;
        params[1] = PI / 2.0;
    };

    if params[1].sin().abs() < 1e-4 {
        recenter(&mut params, &mut frame, &mut points, &mut coords);
    }

    let mut loss = loss_sph(&coords, params[0], params[1], params[2]);

    // Exactly symmetric data (a noiseless ring through the initial center)
    // starts the descent on a saddle where the gradient vanishes. A tiny
    // deterministic tilt of the center breaks the symmetry; anywhere else
    // it is swallowed by the first few steps.
    {
        let g = fd_gradient(&coords, params);
        let gnorm2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
        if gnorm2 < 1e-12 * loss.max(1.0) {
            params[0] += 1e-3;
            params[1] = (params[1] + 1e-3).clamp(1e-3, PI - 1e-3);
            loss = loss_sph(&coords, params[0], params[1], params[2]);
        }
    }
    for _ in 0..cfg.max_iter {
        if params[1].sin().abs() < 1e-4 {
            recenter(&mut params, &mut frame, &mut points, &mut coords);
            loss = loss_sph(&coords, params[0], params[1], params[2]);
        }
        let g = match cfg.gradient_mode {
            GradientMode::FiniteDifference => fd_gradient(&coords, params),
            GradientMode::Analytic => analytic_gradient(&coords, params),
        };
        let gnorm2 = g[0] * g[0] + g[1] * g[1] + g[2] * g[2];
        let mut step = cfg.step_beta;
        let mut accepted = None;
        for _ in 0..40 {
            let mut next = [
                params[0] - step * g[0],
                params[1] - step * g[1],
                params[2] - step * g[2],
            ];
            next[2] = next[2].clamp(1e-6, PI - 1e-6);
            let next_loss = loss_sph(&coords, next[0], next[1], next[2]);
            // Armijo sufficient decrease; a bare `<` would accept the
            // microscopic gains of a step that oscillates around the
            // minimum and stall the descent there.
            if next_loss <= loss - 1e-4 * step * gnorm2 {
                accepted = Some((next, next_loss));
                break;
            }
            step *= 0.5;
        }
        let Some((next, next_loss)) = accepted else {
            break;
        };
        let decrease = loss - next_loss;
        params = next;
        loss = next_loss;
        if decrease < cfg.threshold {
            break;
        }
    }

    let center = geom::from_spherical(&SphCoord {
        theta: params[0],
        rho: params[1],
    });
    let circle = Circle {
        center: frame.transpose().apply(&center),
        radius: params[2],
    };
    Ok(circle.canonicalized())
}

/// Tangent-plane circle: log-map the data at the intrinsic mean, fit an
/// algebraic least-squares circle in the plane, and map the result back.
/// This is the "circle by tangent approximation" used to initialize closed
/// curves in the nearest-vertex baseline; the tangent plane is not
/// isometric to the sphere, so the circle degrades as the data spread
/// grows — which is exactly what the exact fit avoids.
pub fn fit_tangent_circle(data: &[UnitVec3]) -> Result<Circle> {
    if data.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "tangent circle needs at least 3 points, got {}",
            data.len()
        )));
    }
    let sample = WeightedSample::unweighted(data.to_vec())?;
    let mean = stats::intrinsic_mean(&sample, &IterationConfig::default())?.point;

    // Least squares on (‖t‖² - 2c·t - d): rows [2u, 2v, 1] · [cu, cv, d]ᵀ
    // = u² + v², with r² = cu² + cv² + d.
    let mut ata = [[0.0f64; 3]; 3];
    let mut atb = [0.0f64; 3];
    let mut used = 0usize;
    for p in data {
        let Ok(t) = geom::log_map(&mean, p) else {
            continue;
        };
        let row = [2.0 * t.u, 2.0 * t.v, 1.0];
        let rhs = t.u * t.u + t.v * t.v;
        for i in 0..3 {
            for j in 0..3 {
                ata[i][j] += row[i] * row[j];
            }
            atb[i] += row[i] * rhs;
        }
        used += 1;
    }
    if used < 3 {
        return Err(Error::DegenerateInput(
            "not enough mappable points for a tangent circle".into(),
        ));
    }
    let sol = solve3(&ata, &atb).ok_or_else(|| {
        Error::DegenerateInput("singular tangent-circle system (collinear data)".into())
    })?;
    let r2 = sol[0] * sol[0] + sol[1] * sol[1] + sol[2];
    if !(r2 > 0.0) {
        return Err(Error::DegenerateInput(
            "tangent circle has nonpositive radius".into(),
        ));
    }
    let center = geom::exp_map(
        &mean,
        &crate::geom::Tangent2 {
            u: sol[0],
            v: sol[1],
        },
    )?;
    let radius = r2.sqrt().clamp(1e-6, PI - 1e-6);
    Ok(Circle { center, radius }.canonicalized())
}

fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let mut m = [
        [a[0][0], a[0][1], a[0][2], b[0]],
        [a[1][0], a[1][1], a[1][2], b[1]],
        [a[2][0], a[2][1], a[2][2], b[2]],
    ];
    for col in 0..3 {
        let pivot = (col..3).max_by(|&i, &j| {
            m[i][col].abs().partial_cmp(&m[j][col].abs()).unwrap()
        })?;
        if m[pivot][col].abs() < 1e-12 {
            return None;
        }
        m.swap(col, pivot);
        for row in 0..3 {
            if row == col {
                continue;
            }
            let f = m[row][col] / m[col][col];
            for k in col..4 {
                m[row][k] -= f * m[col][k];
            }
        }
    }
    Some([m[0][3] / m[0][0], m[1][3] / m[1][1], m[2][3] / m[2][2]])
}

/// Tangent-plane (PGA) great-circle baseline: log-map the data at the
/// intrinsic mean, take the dominant scatter direction, and return the
/// great circle through the mean in that direction.
pub fn fit_pga_great_circle(data: &[UnitVec3]) -> Result<Circle> {
    if data.len() < 2 {
        return Err(Error::DegenerateInput(format!(
            "PGA needs at least 2 points, got {}",
            data.len()
        )));
    }
    let sample = WeightedSample::unweighted(data.to_vec())?;
    let mean = stats::intrinsic_mean(&sample, &IterationConfig::default())?.point;

    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for p in data {
        // Points antipodal to the mean have no log map; leave them out of
        // the scatter.
        let Ok(t) = geom::log_map(&mean, p) else {
            continue;
        };
        sxx += t.u * t.u;
        sxy += t.u * t.v;
        syy += t.v * t.v;
    }
    if sxx + syy < 1e-18 {
        return Err(Error::DegenerateInput(
            "zero tangent scatter: all points coincide".into(),
        ));
    }

    // Leading eigenvector of the 2×2 scatter matrix.
    let half_trace = 0.5 * (sxx + syy);
    let det = sxx * syy - sxy * sxy;
    let lambda = half_trace + (half_trace * half_trace - det).max(0.0).sqrt();
    let (mut vu, mut vv) = if (lambda - sxx).abs() > sxy.abs() {
        (sxy, lambda - sxx)
    } else {
        (lambda - syy, sxy)
    };
    if vu == 0.0 && vv == 0.0 {
        // Isotropic scatter: any direction is principal; pick the u-axis.
        (vu, vv) = (1.0, 0.0);
    }

    let (e1, e2) = geom::tangent_basis(&mean);
    let dir = [
        e1.x * vu + e2.x * vv,
        e1.y * vu + e2.y * vv,
        e1.z * vu + e2.z * vv,
    ];
    let normal = [
        mean.y * dir[2] - mean.z * dir[1],
        mean.z * dir[0] - mean.x * dir[2],
        mean.x * dir[1] - mean.y * dir[0],
    ];
    let center = UnitVec3::new(normal[0], normal[1], normal[2])?;
    Ok(Circle {
        center,
        radius: PI / 2.0,
    }
    .canonicalized())
}
