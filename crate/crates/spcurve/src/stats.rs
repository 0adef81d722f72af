//! Weighted central-tendency estimators on the sphere: extrinsic mean,
//! intrinsic (Karcher) mean, and the damped-gradient geometric median.

use crate::error::{Error, Result};
use crate::geom::{self, Tangent2, UnitVec3};
use serde::{Deserialize, Serialize};

/// Points with nonnegative weights. At least one point; weight sum positive.
#[derive(Debug, Clone)]
pub struct WeightedSample {
    points: Vec<UnitVec3>,
    weights: Vec<f64>,
    weight_sum: f64,
}

impl WeightedSample {
    pub fn new(points: Vec<UnitVec3>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() || points.len() != weights.len() {
            return Err(Error::DegenerateInput(format!(
                "sample needs matching nonempty points/weights, got {}/{}",
                points.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::DegenerateInput(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let weight_sum: f64 = weights.iter().sum();
        if weight_sum <= 0.0 {
            return Err(Error::DegenerateInput("weight sum must be positive".into()));
        }
        Ok(Self {
            points,
            weights,
            weight_sum,
        })
    }

    /// Equal-weight sample.
    pub fn unweighted(points: Vec<UnitVec3>) -> Result<Self> {
        let w = vec![1.0; points.len()];
        Self::new(points, w)
    }

    pub fn points(&self) -> &[UnitVec3] {
        &self.points
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight_sum(&self) -> f64 {
        self.weight_sum
    }
}

/// Initializer for the geometric median iteration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MedianInit {
    /// Start from the first sample point, as the algorithm states.
    #[default]
    FirstPoint,
    /// Start from the extrinsic mean (less sensitive to ordering).
    ExtrinsicMean,
}

/// Iteration controls shared by the intrinsic mean and the geometric median.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct IterationConfig {
    /// Convergence threshold on the step (intrinsic mean) or on the
    /// undamped gradient magnitude (median), radians.
    pub tol: f64,
    pub max_iter: usize,
    /// Damping exponent α in (0, 1]: the median step at iteration j is
    /// divided by j^α.
    pub damping_alpha: f64,
    pub median_init: MedianInit,
}

impl Default for IterationConfig {
    fn default() -> Self {
        Self {
            tol: 1e-9,
            max_iter: 200,
            damping_alpha: 1.0,
            median_init: MedianInit::FirstPoint,
        }
    }
}

impl IterationConfig {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::DegenerateInput("tol must be positive".into()));
        }
        if self.max_iter < 1 {
            return Err(Error::DegenerateInput("max_iter must be at least 1".into()));
        }
        if !(self.damping_alpha > 0.0 && self.damping_alpha <= 1.0) {
            return Err(Error::DegenerateInput(
                "damping_alpha must lie in (0, 1]".into(),
            ));
        }
        Ok(())
    }
}

/// Output of an iterative estimator; `converged` is a flag, not an error,
/// so batch runs survive slow cases.
#[derive(Debug, Clone, Copy)]
pub struct EstimatorResult {
    pub point: UnitVec3,
    pub converged: bool,
    pub iterations: usize,
}

/// Weighted 3-space average renormalized to the sphere. Errors when the
/// resultant nearly vanishes (e.g. balanced antipodal data).
pub fn extrinsic_mean(s: &WeightedSample) -> Result<UnitVec3> {
    let mut acc = [0.0f64; 3];
    for (p, w) in s.points().iter().zip(s.weights()) {
        acc[0] += w * p.x;
        acc[1] += w * p.y;
        acc[2] += w * p.z;
    }
    let norm = (acc[0] * acc[0] + acc[1] * acc[1] + acc[2] * acc[2]).sqrt() / s.weight_sum();
    if norm < 1e-12 {
        return Err(Error::DegenerateMean);
    }
    UnitVec3::new(acc[0], acc[1], acc[2])
}

/// Intrinsic (Karcher) mean by iterated log/exp averaging, started from the
/// extrinsic mean (falling back to the first sample point when that is
/// degenerate).
///
/// A sample point antipodal to the current iterate has no well-defined log
/// map; such points are skipped for that iteration (the zero subgradient).
pub fn intrinsic_mean(s: &WeightedSample, cfg: &IterationConfig) -> Result<EstimatorResult> {
    cfg.validate()?;
    let mut m = match extrinsic_mean(s) {
        Ok(m) => m,
        Err(Error::DegenerateMean) => s.points()[0],
        Err(e) => return Err(e),
    };
    for j in 1..=cfg.max_iter {
        let mut step = Tangent2 { u: 0.0, v: 0.0 };
        for (p, w) in s.points().iter().zip(s.weights()) {
            let Ok(t) = geom::log_map(&m, p) else {
                continue;
            };
            step.u += w * t.u;
            step.v += w * t.v;
        }
        step.u /= s.weight_sum();
        step.v /= s.weight_sum();
        m = geom::exp_map(&m, &step)?;
        if step.norm() < cfg.tol {
            return Ok(EstimatorResult {
                point: m,
                converged: true,
                iterations: j,
            });
        }
    }
    Ok(EstimatorResult {
        point: m,
        converged: false,
        iterations: cfg.max_iter,
    })
}

/// Geometric median by damped gradient descent on the sum of geodesic
/// distances.
///
/// At iteration j the step is `(1/j^α) · Σ' (wᵢ/W) · logₘ(xᵢ)/‖logₘ(xᵢ)‖`,
/// where the sum skips points coincident with the current iterate (within
/// 1e-12). The iterate is updated first; the stop test compares the
/// undamped magnitude `‖step‖ · j^α` against `tol`, so damping alone cannot
/// fake convergence.
pub fn geometric_median(s: &WeightedSample, cfg: &IterationConfig) -> Result<EstimatorResult> {
    cfg.validate()?;
    let mut m = match cfg.median_init {
        MedianInit::FirstPoint => s.points()[0],
        MedianInit::ExtrinsicMean => match extrinsic_mean(s) {
            Ok(m) => m,
            Err(Error::DegenerateMean) => s.points()[0],
            Err(e) => return Err(e),
        },
    };
    for j in 1..=cfg.max_iter {
        let mut pull = Tangent2 { u: 0.0, v: 0.0 };
        for (p, w) in s.points().iter().zip(s.weights()) {
            if geom::geodesic_distance(&m, p) <= 1e-12 {
                continue;
            }
            // Antipodal points are skipped like coincident ones: the unit
            // gradient direction is undefined there.
            let Ok(t) = geom::log_map(&m, p) else {
                continue;
            };
            let n = t.norm();
            pull.u += w / s.weight_sum() * t.u / n;
            pull.v += w / s.weight_sum() * t.v / n;
        }
        let undamped = pull.norm();
        let damp = (j as f64).powf(cfg.damping_alpha);
        let step = Tangent2 {
            u: pull.u / damp,
            v: pull.v / damp,
        };
        m = geom::exp_map(&m, &step)?;
        if undamped < cfg.tol {
            return Ok(EstimatorResult {
                point: m,
                converged: true,
                iterations: j,
            });
        }
    }
    Ok(EstimatorResult {
        point: m,
        converged: false,
        iterations: cfg.max_iter,
    })
}
