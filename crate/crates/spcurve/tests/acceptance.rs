//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (run with `--nocapture` to see them on success).
//!
//! Criteria 1(partially), 4, and 8(partially) encode reference-table
//! behavior of the nearest-vertex baseline that is not reproducible from
//! the published description; those asserts are implemented faithfully and
//! are expected to fail. See the test messages for the specifics.

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use spcurve::circlefit::{self, CircleFitConfig};
use spcurve::dataio::{self, CatalogFormat, GenSpec, NoiseKind, ParseMode, Shape};
use spcurve::eval::{self, LossKind, Method, MonteCarloConfig, MonteCarloReport, PerturbSpec};
use spcurve::geom::{self, Tangent2, UnitVec3};
use spcurve::pcurve::{self, Curve, CurveFitConfig, MeanKind};
use std::f64::consts::PI;
use std::path::Path;
use std::sync::OnceLock;

fn quake_data() -> &'static Vec<UnitVec3> {
    static DATA: OnceLock<Vec<UnitVec3>> = OnceLock::new();
    DATA.get_or_init(|| {
        let path =
            Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data/usgs_pacific_m8_1900.csv");
        let load = dataio::load_catalog(&path, CatalogFormat::UsgsCsv, 8.0, ParseMode::Strict)
            .expect("bundled catalog");
        load.dataset.points().to_vec()
    })
}

#[derive(Debug, Clone)]
struct CellOutcome {
    t: usize,
    q: f64,
    method: Method,
    error: f64,
    distinct: usize,
    converged: bool,
    nonincreasing: bool,
}

/// Every Table-1 cell, fitted once: the proposed methods from the
/// principal circle, the baseline from its tangent circle.
fn quake_cells() -> &'static Vec<CellOutcome> {
    static CELLS: OnceLock<Vec<CellOutcome>> = OnceLock::new();
    CELLS.get_or_init(|| {
        let data = quake_data();
        let circle = circlefit::fit_principal_circle(data, &CircleFitConfig::default()).unwrap();
        let tangent = circlefit::fit_tangent_circle(data).unwrap();
        let mut out = Vec::new();
        for &t in &[77usize, 500] {
            let init = pcurve::sample_circle_vertices(&circle, t).unwrap();
            let tinit = pcurve::sample_circle_vertices(&tangent, t).unwrap();
            for &q in &[0.2, 0.1, 0.05, 0.01] {
                for method in [Method::Extrinsic, Method::Intrinsic, Method::Hauberg] {
                    let cfg = CurveFitConfig {
                        t_vertices: t,
                        q,
                        mean_kind: method.mean_kind(),
                        hauberg_projection: method.uses_nearest_vertex(),
                        ..Default::default()
                    };
                    let start = if method.uses_nearest_vertex() {
                        &tinit
                    } else {
                        &init
                    };
                    let r = pcurve::fit(data, start, &cfg).unwrap();
                    let error = *r.delta_history.last().unwrap();
                    out.push(CellOutcome {
                        t,
                        q,
                        method,
                        error,
                        distinct: r.distinct_projections,
                        converged: r.converged && r.aborted.is_none(),
                        nonincreasing: error <= r.delta_history[0] + 1e-12,
                    });
                }
            }
        }
        out
    })
}

fn cell(t: usize, q: f64, method: Method) -> &'static CellOutcome {
    quake_cells()
        .iter()
        .find(|c| c.t == t && c.q == q && c.method == method)
        .unwrap()
}

fn mc_circle() -> &'static MonteCarloReport {
    static REPORT: OnceLock<MonteCarloReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        eval::run_monte_carlo(&MonteCarloConfig {
            shape: Shape::Circle,
            alpha: 0.0,
            freq: 0,
            n: 100,
            noise_sigma: 0.07,
            noise_kind: NoiseKind::Gaussian,
            t_vertices: 100,
            q: 0.05,
            methods: vec![Method::Extrinsic, Method::Intrinsic, Method::Hauberg],
            runs: 50,
            seed: 2020,
        })
        .unwrap()
    })
}

fn mc_wave() -> &'static MonteCarloReport {
    static REPORT: OnceLock<MonteCarloReport> = OnceLock::new();
    REPORT.get_or_init(|| {
        eval::run_monte_carlo(&MonteCarloConfig {
            shape: Shape::Wave,
            alpha: 1.0 / 3.0,
            freq: 4,
            n: 100,
            noise_sigma: 0.07,
            noise_kind: NoiseKind::Gaussian,
            t_vertices: 100,
            q: 0.05,
            methods: vec![Method::Extrinsic, Method::Hauberg],
            runs: 20,
            seed: 4040,
        })
        .unwrap()
    })
}

fn summary(report: &MonteCarloReport, method: Method) -> &eval::MethodSummary {
    report
        .methods
        .iter()
        .find(|m| m.method == method)
        .unwrap()
}

#[test]
fn criterion_01_table1_reproduction() {
    let mut violations = Vec::new();
    for &t in &[77usize, 500] {
        for &q in &[0.2, 0.1, 0.05, 0.01] {
            let ext = cell(t, q, Method::Extrinsic);
            let int = cell(t, q, Method::Intrinsic);
            let hau = cell(t, q, Method::Hauberg);
            if !(ext.error < hau.error) {
                violations.push(format!(
                    "T={t} q={q}: extrinsic {:.4} !< hauberg {:.4}",
                    ext.error, hau.error
                ));
            }
            if !(int.error < hau.error) {
                violations.push(format!(
                    "T={t} q={q}: intrinsic {:.4} !< hauberg {:.4}",
                    int.error, hau.error
                ));
            }
            if ext.distinct < 70 || int.distinct < 70 {
                violations.push(format!(
                    "T={t} q={q}: proposed distinct {}/{} below 70",
                    ext.distinct, int.distinct
                ));
            }
            if hau.distinct > 40 {
                violations.push(format!(
                    "T={t} q={q}: hauberg distinct {} above 40",
                    hau.distinct
                ));
            }
        }
    }
    let anchor_ext = cell(77, 0.01, Method::Extrinsic).error;
    if !(0.03..=0.12).contains(&anchor_ext) {
        violations.push(format!("anchor extrinsic {anchor_ext:.4} outside [0.03, 0.12]"));
    }
    let anchor_hau = cell(77, 0.01, Method::Hauberg).error;
    if !(0.1..=0.5).contains(&anchor_hau) {
        violations.push(format!("anchor hauberg {anchor_hau:.4} outside [0.1, 0.5]"));
    }
    if violations.is_empty() {
        println!("ACCEPTANCE 1 (Table 1 earthquake reproduction): PASS");
    } else {
        println!(
            "ACCEPTANCE 1 (Table 1 earthquake reproduction): FAIL — {} violation(s)",
            violations.len()
        );
    }
    assert!(
        violations.is_empty(),
        "Table-1 violations:\n  {}\nThe nearest-vertex baseline under the \
         specified loop semantics (arc-length λ, σ = q·length, unit-speed \
         reparameterization each iteration) spreads its vertices too evenly \
         at T=500 to reproduce the reference's ≤ 40 distinct projections; \
         see the decisions ledger for the attempted alternatives.",
        violations.join("\n  ")
    );
}

#[test]
fn criterion_02_table2_circle_error() {
    let ext = summary(mc_circle(), Method::Extrinsic);
    let int = summary(mc_circle(), Method::Intrinsic);
    let in_band = (0.015..=0.171).contains(&ext.error_mean);
    let agree = (ext.error_mean - int.error_mean).abs() <= 0.01;
    println!(
        "ACCEPTANCE 2 (Table 2 circle row): {} — extrinsic {:.4} (sd {:.4}) in [0.015, 0.171]: {}, |ext-int| = {:.5} <= 0.01: {}",
        if in_band && agree { "PASS" } else { "FAIL" },
        ext.error_mean,
        ext.error_sd,
        in_band,
        (ext.error_mean - int.error_mean).abs(),
        agree
    );
    assert!(in_band && agree);
}

#[test]
fn criterion_03_table3_circle_distinct() {
    let ext = summary(mc_circle(), Method::Extrinsic);
    let int = summary(mc_circle(), Method::Intrinsic);
    let hau = summary(mc_circle(), Method::Hauberg);
    let ok = ext.distinct_mean >= 97.0 && int.distinct_mean >= 97.0 && hau.distinct_mean <= 95.0;
    println!(
        "ACCEPTANCE 3 (Table 3 circle row): {} — distinct extrinsic {:.2}, intrinsic {:.2} (>= 97), hauberg {:.2} (<= 95)",
        if ok { "PASS" } else { "FAIL" },
        ext.distinct_mean,
        int.distinct_mean,
        hau.distinct_mean
    );
    assert!(ok);
}

#[test]
fn criterion_04_table2_wave_ordering() {
    let ext = summary(mc_wave(), Method::Extrinsic);
    let hau = summary(mc_wave(), Method::Hauberg);
    let ratio = hau.error_mean / ext.error_mean;
    let ok = hau.error_mean >= 2.0 * ext.error_mean;
    println!(
        "ACCEPTANCE 4 (Table 2 wave ordering): {} — hauberg {:.4} vs extrinsic {:.4} (ratio {:.2}, need >= 2)",
        if ok { "PASS" } else { "FAIL" },
        hau.error_mean,
        ext.error_mean,
        ratio
    );
    assert!(
        ok,
        "wave ratio {ratio:.2} < 2: the baseline fitted under the specified \
         loop semantics degrades far less on waves than the reference's \
         reimplementation did (2.444/0.703 ≈ 3.5); the ordering itself holds. \
         See the decisions ledger."
    );
}

#[test]
fn criterion_05_principal_circle_recovery() {
    let truth_center = UnitVec3::north();
    let data: Vec<UnitVec3> = (0..100)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / 100.0;
            geom::from_spherical(&geom::SphCoord {
                theta,
                rho: PI / 4.0,
            })
        })
        .collect();
    let fitted = circlefit::fit_principal_circle(&data, &CircleFitConfig::default()).unwrap();
    let radius_err = (fitted.radius - PI / 4.0).abs();
    let axis_err = geom::geodesic_distance(&fitted.center, &truth_center)
        .min(geom::geodesic_distance(&fitted.center.neg(), &truth_center));
    let loss = circlefit::circle_loss(&data, &fitted);
    let ok = radius_err <= 1e-3 && axis_err <= 1e-3 && loss <= 1e-6;
    println!(
        "ACCEPTANCE 5 (principal-circle recovery): {} — radius err {radius_err:.2e}, axis err {axis_err:.2e}, loss {loss:.2e}",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}

/// Brute-force minimum over per-segment grids with endpoints included,
/// roughly `samples` points total, then one local refinement pass around
/// the winning sample (100x finer), which bounds the oracle's own
/// resolution error by the refined step even for points lying almost on
/// the curve.
fn dense_min_distance(p: &UnitVec3, curve: &Curve, samples: usize) -> f64 {
    let total = curve.total_length();
    let mut best = f64::INFINITY;
    let mut best_seg = 0usize;
    let mut best_t = 0.0f64;
    let mut best_m = 2usize;
    for s in 0..curve.segment_count() {
        let (a, b) = curve.segment(s);
        let seg_len = geom::geodesic_distance(a, b);
        let m = ((samples as f64 * seg_len / total).ceil() as usize).max(2);
        for j in 0..=m {
            let t = j as f64 / m as f64;
            let q = geom::geodesic_point(a, b, t).unwrap();
            let d = geom::geodesic_distance(p, &q);
            if d < best {
                best = d;
                best_seg = s;
                best_t = t;
                best_m = m;
            }
        }
    }
    let (a, b) = curve.segment(best_seg);
    let half = 1.0 / best_m as f64;
    for j in 0..=200 {
        let t = (best_t - half + 2.0 * half * j as f64 / 200.0).clamp(0.0, 1.0);
        let q = geom::geodesic_point(a, b, t).unwrap();
        best = best.min(geom::geodesic_distance(p, &q));
    }
    best
}

fn random_unit(rng: &mut impl Rng) -> UnitVec3 {
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

fn random_walk_curve(rng: &mut impl Rng, vertices: usize, closed: bool) -> Curve {
    loop {
        let mut v = vec![random_unit(rng)];
        for _ in 1..vertices {
            let t = Tangent2 {
                u: rng.gen_range(-0.3..0.3),
                v: rng.gen_range(-0.3..0.3),
            };
            v.push(geom::exp_map(v.last().unwrap(), &t).unwrap());
        }
        if let Ok(c) = pcurve::reparameterize_unit_speed(&v, closed) {
            if c.vertices().len() == vertices {
                return c;
            }
        }
    }
}

#[test]
fn criterion_06_projection_oracle_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let mut failures = 0usize;
    let mut worst: f64 = 0.0;
    for trial in 0..1000 {
        let closed = trial % 2 == 0;
        let curve = random_walk_curve(&mut rng, 20, closed);
        let p = random_unit(&mut rng);
        let pr = pcurve::project_to_curve(&p, &curve).unwrap();
        let brute = dense_min_distance(&p, &curve, 100_000);
        let gap = (pr.distance - brute).abs();
        worst = worst.max(gap);
        if gap >= 1e-6 {
            failures += 1;
        }
    }
    println!(
        "ACCEPTANCE 6 (projection oracle equivalence): {} — {}/1000 within 1e-6 (worst gap {worst:.2e})",
        if failures == 0 { "PASS" } else { "FAIL" },
        1000 - failures
    );
    assert_eq!(failures, 0);
}

/// Two-stage tangent-plane grid search: coarse over the whole region, then
/// a 0.001-rad mesh around the coarse winner.
fn grid_search_min(
    points: &[UnitVec3],
    weights: &[f64],
    center: &UnitVec3,
    span: f64,
    squared: bool,
) -> UnitVec3 {
    let objective = |p: &UnitVec3| -> f64 {
        points
            .iter()
            .zip(weights)
            .map(|(x, w)| {
                let d = geom::geodesic_distance(p, x);
                w * if squared { d * d } else { d }
            })
            .sum()
    };
    let mut best = *center;
    let mut best_val = objective(&best);
    for (stage_span, step) in [(span, 0.005), (0.012, 0.001)] {
        let base = best;
        let steps = (stage_span / step).ceil() as i64;
        for i in -steps..=steps {
            for j in -steps..=steps {
                let t = Tangent2 {
                    u: i as f64 * step,
                    v: j as f64 * step,
                };
                if t.norm() > stage_span {
                    continue;
                }
                let p = geom::exp_map(&base, &t).unwrap();
                let v = objective(&p);
                if v < best_val {
                    best_val = v;
                    best = p;
                }
            }
        }
    }
    best
}

#[test]
fn criterion_07_mean_median_oracles() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let mut worst_int: f64 = 0.0;
    let mut worst_med: f64 = 0.0;
    for _ in 0..50 {
        let center = random_unit(&mut rng);
        let pts: Vec<UnitVec3> = (0..10)
            .map(|_| {
                let r = (PI / 4.0) * rng.gen_range(0.0..1.0f64).sqrt();
                let phi = rng.gen_range(0.0..2.0 * PI);
                geom::exp_map(
                    &center,
                    &Tangent2 {
                        u: r * phi.cos(),
                        v: r * phi.sin(),
                    },
                )
                .unwrap()
            })
            .collect();
        let weights = vec![1.0; pts.len()];
        let sample = spcurve::stats::WeightedSample::unweighted(pts.clone()).unwrap();

        let int = spcurve::stats::intrinsic_mean(
            &sample,
            &spcurve::stats::IterationConfig {
                tol: 1e-12,
                max_iter: 1000,
                ..Default::default()
            },
        )
        .unwrap()
        .point;
        let grid = grid_search_min(&pts, &weights, &int, PI / 4.0, true);
        worst_int = worst_int.max(geom::geodesic_distance(&int, &grid));

        let med = spcurve::stats::geometric_median(
            &sample,
            &spcurve::stats::IterationConfig {
                tol: 1e-7,
                max_iter: 50_000,
                ..Default::default()
            },
        )
        .unwrap()
        .point;
        let grid = grid_search_min(&pts, &weights, &med, PI / 4.0, false);
        worst_med = worst_med.max(geom::geodesic_distance(&med, &grid));
    }

    // Extrinsic vs intrinsic agreement inside 0.1-rad caps.
    let mut worst_agree: f64 = 0.0;
    for _ in 0..50 {
        let center = random_unit(&mut rng);
        let pts: Vec<UnitVec3> = (0..10)
            .map(|_| {
                let r = 0.1 * rng.gen_range(0.0..1.0f64).sqrt();
                let phi = rng.gen_range(0.0..2.0 * PI);
                geom::exp_map(
                    &center,
                    &Tangent2 {
                        u: r * phi.cos(),
                        v: r * phi.sin(),
                    },
                )
                .unwrap()
            })
            .collect();
        let sample = spcurve::stats::WeightedSample::unweighted(pts).unwrap();
        let ext = spcurve::stats::extrinsic_mean(&sample).unwrap();
        let int = spcurve::stats::intrinsic_mean(
            &sample,
            &spcurve::stats::IterationConfig::default(),
        )
        .unwrap()
        .point;
        worst_agree = worst_agree.max(geom::geodesic_distance(&ext, &int));
    }

    let ok = worst_int <= 1e-3 && worst_med <= 1e-3 && worst_agree <= 1e-3;
    println!(
        "ACCEPTANCE 7 (means/median oracles): {} — intrinsic vs grid {worst_int:.2e}, median vs grid {worst_med:.2e}, extrinsic vs intrinsic {worst_agree:.2e} (all <= 1e-3)",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}

#[test]
fn criterion_08_stationarity() {
    let spec = GenSpec {
        shape: Shape::Circle,
        alpha: 0.0,
        freq: 0,
        n: 100,
        noise_sigma: 0.07,
        noise_kind: NoiseKind::Gaussian,
        seed: 9,
    };
    let data = dataio::generate(&spec).unwrap().points().to_vec();
    let circle = circlefit::fit_principal_circle(&data, &CircleFitConfig::default()).unwrap();
    let init = pcurve::sample_circle_vertices(&circle, 100).unwrap();

    let mut lines = Vec::new();
    let mut converged_ok = true;
    let mut contrast_ok = true;
    for (kind, loss) in [
        (MeanKind::Extrinsic, LossKind::Cosine),
        (MeanKind::Intrinsic, LossKind::Squared),
        (MeanKind::Median, LossKind::Absolute),
    ] {
        let cfg = CurveFitConfig {
            t_vertices: 100,
            q: 0.05,
            mean_kind: kind,
            threshold: 1e-10,
            max_iter: 400,
            ..Default::default()
        };
        let report = pcurve::fit(&data, &init, &cfg).unwrap();
        let f = &report.final_curve;
        let n = data.len() as f64;
        let mean_sq = report.delta_history.last().unwrap() / n;
        let mean_abs: f64 =
            report.projections.iter().map(|p| p.distance).sum::<f64>() / n;
        // Per-point loss scale: the squared-distance scale for the cosine
        // and squared losses (2 - 2cos d ≈ d²), the plain distance for the
        // absolute loss.
        let scale = if matches!(loss, LossKind::Absolute) {
            mean_abs
        } else {
            mean_sq
        };
        let bound = 1e-2 * scale;

        // Displace by rotating the fitted curve 0.1 rad about the x-axis.
        let rot = geom::rotation_taking(
            &UnitVec3::north(),
            &geom::exp_map(&UnitVec3::north(), &Tangent2 { u: 0.1, v: 0.0 }).unwrap(),
        );
        let displaced_vertices: Vec<UnitVec3> =
            f.vertices().iter().map(|v| rot.apply(v)).collect();
        let displaced =
            pcurve::reparameterize_unit_speed(&displaced_vertices, f.is_closed()).unwrap();

        let mut rng = ChaCha8Rng::seed_from_u64(808);
        let mut max_conv: f64 = 0.0;
        let mut max_disp: f64 = 0.0;
        for _ in 0..20 {
            let target = eval::random_smooth_target(f, 0.1, &mut rng).unwrap();
            let g = eval::stationarity_gradient(
                &data,
                f,
                &PerturbSpec::new(target, 1.0).unwrap(),
                loss,
                1e-3,
            )
            .unwrap();
            max_conv = max_conv.max(g.abs());
            let dtarget = eval::random_smooth_target(&displaced, 0.1, &mut rng).unwrap();
            let dg = eval::stationarity_gradient(
                &data,
                &displaced,
                &PerturbSpec::new(dtarget, 1.0).unwrap(),
                loss,
                1e-3,
            )
            .unwrap();
            max_disp = max_disp.max(dg.abs());
        }
        if max_conv > bound {
            converged_ok = false;
        }
        if max_disp < 10.0 * bound {
            contrast_ok = false;
        }
        lines.push(format!(
            "{loss:?}: converged max |grad| {max_conv:.2e} vs bound {bound:.2e} ({:.1}x), displaced {max_disp:.2e} ({:.1}x bound)",
            max_conv / bound,
            max_disp / bound
        ));
    }
    let ok = converged_ok && contrast_ok;
    println!(
        "ACCEPTANCE 8 (stationarity): {} —\n  {}",
        if ok { "PASS" } else { "FAIL" },
        lines.join("\n  ")
    );
    assert!(
        ok,
        "stationarity details:\n  {}\nThe displaced-curve contrast holds, \
         but the converged-fit gradients sit a small factor above the 1e-2 \
         bound: the kernel-smoothed fixed point differs from the exact \
         sample principal curve by a smoothing-bias term plus an \
         O(σ·‖g‖/√n) sampling term that the stated tolerance does not \
         cover at n = 100. See the decisions ledger.",
        lines.join("\n  ")
    );
}

#[test]
fn criterion_09_median_robustness() {
    let mut med_devs = Vec::new();
    let mut ext_devs = Vec::new();
    for seed in 0..12u64 {
        let spec = GenSpec {
            shape: Shape::Circle,
            alpha: 0.0,
            freq: 0,
            n: 200,
            noise_sigma: 0.05,
            noise_kind: NoiseKind::Cauchy,
            seed,
        };
        let data = dataio::generate(&spec).unwrap().points().to_vec();
        let circle =
            circlefit::fit_principal_circle(&data, &CircleFitConfig::default()).unwrap();
        let init = pcurve::sample_circle_vertices(&circle, 100).unwrap();
        for (kind, devs) in [
            (MeanKind::Median, &mut med_devs),
            (MeanKind::Extrinsic, &mut ext_devs),
        ] {
            let cfg = CurveFitConfig {
                t_vertices: 100,
                q: 0.1,
                mean_kind: kind,
                ..Default::default()
            };
            let r = pcurve::fit(&data, &init, &cfg).unwrap();
            let dev: f64 = r
                .final_curve
                .vertices()
                .iter()
                .map(|v| (geom::geodesic_distance(v, &UnitVec3::north()) - PI / 4.0).abs())
                .sum::<f64>()
                / r.final_curve.vertices().len() as f64;
            devs.push(dev);
        }
    }
    let med: f64 = med_devs.iter().sum::<f64>() / med_devs.len() as f64;
    let ext: f64 = ext_devs.iter().sum::<f64>() / ext_devs.len() as f64;
    let ok = med < ext;
    println!(
        "ACCEPTANCE 9 (median robustness under Cauchy noise): {} — mean deviation median {med:.4} vs extrinsic {ext:.4} over 12 seeds",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok);
}

#[test]
fn criterion_10_algorithmic_sanity() {
    // Final δ ≤ initial δ on every acceptance fit, and ≥ 95% of runs
    // terminate before max_iter.
    let mut runs = 0usize;
    let mut converged = 0usize;
    let mut nonincreasing_ok = true;
    for c in quake_cells() {
        runs += 1;
        if c.converged {
            converged += 1;
        }
        if !c.nonincreasing {
            nonincreasing_ok = false;
        }
    }
    for report in [mc_circle(), mc_wave()] {
        for m in &report.methods {
            runs += m.runs_ok;
            converged += m.converged_runs;
            if m.nonincreasing_runs != m.runs_ok {
                nonincreasing_ok = false;
            }
        }
    }
    let fraction = converged as f64 / runs as f64;
    let ok = nonincreasing_ok && fraction >= 0.95;
    println!(
        "ACCEPTANCE 10 (algorithmic sanity): {} — final delta <= initial on all runs: {}, converged {}/{} ({:.1}%)",
        if ok { "PASS" } else { "FAIL" },
        nonincreasing_ok,
        converged,
        runs,
        100.0 * fraction
    );
    assert!(ok);
}
