//! Data generation, catalog ingestion, and file export.
//!
//! Generation is deterministic: one `ChaCha8` stream per dataset, seeded by
//! the spec's `seed`, drawing exactly one noise value per point in index
//! order. That makes datasets reproducible across runs and platforms given
//! the same seed.

use crate::error::{Error, Result};
use crate::geom::{self, SphCoord, UnitVec3};
use crate::pcurve::{Curve, FitReport, ProjectionResult};
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Cauchy, Distribution, Normal};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

/// Optional per-point metadata carried through catalog ingestion.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PointMeta {
    pub id: Option<String>,
    pub time: Option<String>,
    pub magnitude: Option<f64>,
    pub mag_type: Option<String>,
}

/// Points on the sphere plus optional metadata and a free-form provenance
/// note describing where they came from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Dataset {
    points: Vec<UnitVec3>,
    pub labels: Option<Vec<PointMeta>>,
    pub provenance: String,
}

impl Dataset {
    pub fn new(points: Vec<UnitVec3>, labels: Option<Vec<PointMeta>>, provenance: String) -> Self {
        Self {
            points,
            labels,
            provenance,
        }
    }

    pub fn points(&self) -> &[UnitVec3] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// The two simulated ground-truth shapes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Shape {
    /// Latitude circle at polar angle π/4.
    Circle,
    /// Wave around the equator: polar angle `α·sin(f·θ) + π/2` for
    /// azimuth θ, making `f` full periods around the sphere.
    Wave,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NoiseKind {
    Gaussian,
    Cauchy,
}

/// Specification of a simulated dataset.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GenSpec {
    pub shape: Shape,
    /// Wave amplitude in radians (ignored for circles).
    pub alpha: f64,
    /// Wave frequency (ignored for circles).
    pub freq: u32,
    pub n: usize,
    /// Noise scale: standard deviation for Gaussian, scale for Cauchy.
    pub noise_sigma: f64,
    pub noise_kind: NoiseKind,
    pub seed: u64,
}

/// The noiseless polar angle of a shape at azimuth `theta`.
pub fn shape_polar_angle(shape: Shape, alpha: f64, freq: u32, theta: f64) -> f64 {
    match shape {
        Shape::Circle => PI / 4.0,
        Shape::Wave => alpha * (freq as f64 * theta).sin() + PI / 2.0,
    }
}

/// The noiseless sample of a shape at the same equally spaced azimuths the
/// generator uses: the benchmark's ground truth.
pub fn true_samples(spec: &GenSpec) -> Vec<UnitVec3> {
    (0..spec.n)
        .map(|i| {
            let theta = 2.0 * PI * i as f64 / spec.n as f64;
            let rho = shape_polar_angle(spec.shape, spec.alpha, spec.freq, theta);
            geom::from_spherical(&SphCoord { theta, rho })
        })
        .collect()
}

/// Generates `n` points with azimuths equally spaced over [0, 2π) (the
/// half-open grid `θ_i = 2πi/n`, so the seam point is not duplicated) and
/// i.i.d. noise added to the polar angle. Polar angles that leave (0, π)
/// after noise are clipped just inside; the count of clipped points is
/// recorded in the provenance string.
pub fn generate(spec: &GenSpec) -> Result<Dataset> {
    if spec.n < 2 {
        return Err(Error::DegenerateInput(format!(
            "need at least 2 points, got {}",
            spec.n
        )));
    }
    if !(spec.noise_sigma >= 0.0) || !spec.alpha.is_finite() {
        return Err(Error::DegenerateInput(
            "noise_sigma must be nonnegative and alpha finite".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let gaussian = Normal::new(0.0, spec.noise_sigma.max(f64::MIN_POSITIVE))
        .map_err(|e| Error::DegenerateInput(e.to_string()))?;
    let cauchy = Cauchy::new(0.0, spec.noise_sigma.max(f64::MIN_POSITIVE))
        .map_err(|e| Error::DegenerateInput(e.to_string()))?;

    let mut clipped = 0usize;
    let mut points = Vec::with_capacity(spec.n);
    for i in 0..spec.n {
        let theta = 2.0 * PI * i as f64 / spec.n as f64;
        let mut phi = shape_polar_angle(spec.shape, spec.alpha, spec.freq, theta);
        if spec.noise_sigma > 0.0 {
            phi += match spec.noise_kind {
                NoiseKind::Gaussian => gaussian.sample(&mut rng),
                NoiseKind::Cauchy => cauchy.sample(&mut rng),
            };
        }
        if !(1e-9..=PI - 1e-9).contains(&phi) {
            phi = phi.clamp(1e-9, PI - 1e-9);
            clipped += 1;
        }
        points.push(geom::from_spherical(&SphCoord { theta, rho: phi }));
    }
    let provenance = format!(
        "generated shape={:?} alpha={} freq={} n={} sigma={} noise={:?} seed={} clipped={}",
        spec.shape,
        spec.alpha,
        spec.freq,
        spec.n,
        spec.noise_sigma,
        spec.noise_kind,
        spec.seed,
        clipped
    );
    Ok(Dataset::new(points, None, provenance))
}

/// Supported input file layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CatalogFormat {
    /// Comma-separated with a header naming at least
    /// `time,latitude,longitude,mag,magType`.
    UsgsCsv,
    /// Numeric `lon,lat` rows in degrees; a header row naming the columns
    /// is accepted and used when present.
    LonlatCsv,
    /// Numeric `x,y,z` rows, renormalized onto the sphere; a header row
    /// naming the columns is accepted and used when present.
    XyzCsv,
}

impl CatalogFormat {
    pub fn parse(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "usgs-csv" => Ok(Self::UsgsCsv),
            "lonlat-csv" => Ok(Self::LonlatCsv),
            "xyz-csv" => Ok(Self::XyzCsv),
            other => Err(Error::DegenerateInput(format!("unknown format `{other}`"))),
        }
    }
}

/// Whether a malformed row aborts the load or is skipped and reported.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ParseMode {
    #[default]
    Strict,
    Lenient,
}

#[derive(Debug, Clone, Serialize)]
pub struct RowIssue {
    pub line: usize,
    pub message: String,
}

/// The loaded dataset plus any rows skipped in lenient mode.
#[derive(Debug, Clone)]
pub struct CatalogLoad {
    pub dataset: Dataset,
    pub skipped: Vec<RowIssue>,
}

struct UsgsColumns {
    time: usize,
    latitude: usize,
    longitude: usize,
    mag: usize,
    mag_type: usize,
    id: Option<usize>,
}

fn usgs_columns(path: &Path, headers: &csv::StringRecord) -> Result<UsgsColumns> {
    let find = |name: &str| -> Result<usize> {
        headers
            .iter()
            .position(|h| h.trim() == name)
            .ok_or_else(|| Error::MissingColumn {
                path: path.to_path_buf(),
                column: name.to_string(),
            })
    };
    Ok(UsgsColumns {
        time: find("time")?,
        latitude: find("latitude")?,
        longitude: find("longitude")?,
        mag: find("mag")?,
        mag_type: find("magType")?,
        id: headers.iter().position(|h| h.trim() == "id"),
    })
}

/// Loads a point catalog. For `usgs-csv` the rows are filtered to
/// `mag ≥ min_magnitude`; the plain numeric formats ignore the threshold.
pub fn load_catalog(
    path: &Path,
    format: CatalogFormat,
    min_magnitude: f64,
    mode: ParseMode,
) -> Result<CatalogLoad> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let reader = BufReader::new(file);
    match format {
        CatalogFormat::UsgsCsv => load_usgs(path, reader, min_magnitude, mode),
        CatalogFormat::LonlatCsv => load_numeric(path, reader, mode, 2, |fields| {
            geom::lonlat_to_unit(fields[0], fields[1])
        }),
        CatalogFormat::XyzCsv => load_numeric(path, reader, mode, 3, |fields| {
            UnitVec3::new(fields[0], fields[1], fields[2])
        }),
    }
}

fn load_usgs(
    path: &Path,
    reader: impl std::io::Read,
    min_magnitude: f64,
    mode: ParseMode,
) -> Result<CatalogLoad> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(reader);
    let headers = rdr
        .headers()
        .map_err(|e| Error::Parse {
            path: path.to_path_buf(),
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let cols = usgs_columns(path, &headers)?;

    let mut points = Vec::new();
    let mut labels = Vec::new();
    let mut skipped = Vec::new();
    for (idx, record) in rdr.records().enumerate() {
        let line = idx + 2;
        let parsed: Result<Option<(UnitVec3, PointMeta)>> = (|| {
            let record = record.map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line,
                message: e.to_string(),
            })?;
            let field = |i: usize| -> Result<&str> {
                record.get(i).ok_or_else(|| Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("missing field {i}"),
                })
            };
            let num = |i: usize, name: &str| -> Result<f64> {
                field(i)?.trim().parse::<f64>().map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("bad {name}: {e}"),
                })
            };
            let mag = num(cols.mag, "mag")?;
            if mag < min_magnitude {
                return Ok(None);
            }
            let lat = num(cols.latitude, "latitude")?;
            let lon = num(cols.longitude, "longitude")?;
            let point = geom::lonlat_to_unit(lon, lat).map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line,
                message: e.to_string(),
            })?;
            let meta = PointMeta {
                id: cols.id.and_then(|i| record.get(i)).map(str::to_string),
                time: Some(field(cols.time)?.to_string()),
                magnitude: Some(mag),
                mag_type: Some(field(cols.mag_type)?.to_string()),
            };
            Ok(Some((point, meta)))
        })();
        match parsed {
            Ok(Some((point, meta))) => {
                points.push(point);
                labels.push(meta);
            }
            Ok(None) => {}
            Err(e) => match mode {
                ParseMode::Strict => return Err(e),
                ParseMode::Lenient => skipped.push(RowIssue {
                    line,
                    message: e.to_string(),
                }),
            },
        }
    }
    let provenance = format!(
        "usgs-csv {} min_mag={} rows={} skipped={}",
        path.display(),
        min_magnitude,
        points.len(),
        skipped.len()
    );
    Ok(CatalogLoad {
        dataset: Dataset::new(points, Some(labels), provenance),
        skipped,
    })
}

fn load_numeric(
    path: &Path,
    reader: impl std::io::Read,
    mode: ParseMode,
    arity: usize,
    make: impl Fn(&[f64]) -> Result<UnitVec3>,
) -> Result<CatalogLoad> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(reader);
    let mut points = Vec::new();
    let mut skipped = Vec::new();
    // Column indices to read; adjusted if the first row is a header.
    let mut take: Vec<usize> = (0..arity).collect();
    for (idx, record) in rdr.records().enumerate() {
        let line = idx + 1;
        let record = match record {
            Ok(r) => r,
            Err(e) => {
                let err = Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: e.to_string(),
                };
                match mode {
                    ParseMode::Strict => return Err(err),
                    ParseMode::Lenient => {
                        skipped.push(RowIssue {
                            line,
                            message: err.to_string(),
                        });
                        continue;
                    }
                }
            }
        };
        if line == 1 && record.iter().any(|f| f.trim().parse::<f64>().is_err()) {
            // Header row: locate named columns.
            let names: Vec<Vec<&str>> = if arity == 2 {
                vec![
                    vec!["lon", "lon_deg", "longitude"],
                    vec!["lat", "lat_deg", "latitude"],
                ]
            } else {
                vec![vec!["x"], vec!["y"], vec!["z"]]
            };
            take = names
                .iter()
                .map(|aliases| {
                    record
                        .iter()
                        .position(|h| aliases.contains(&h.trim()))
                        .ok_or_else(|| Error::MissingColumn {
                            path: path.to_path_buf(),
                            column: aliases[0].to_string(),
                        })
                })
                .collect::<Result<_>>()?;
            continue;
        }
        let parsed: Result<UnitVec3> = (|| {
            let mut fields = Vec::with_capacity(arity);
            for &col in &take {
                let raw = record.get(col).ok_or_else(|| Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: format!("missing field {col}"),
                })?;
                fields.push(raw.trim().parse::<f64>().map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    line,
                    message: e.to_string(),
                })?);
            }
            make(&fields).map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line,
                message: e.to_string(),
            })
        })();
        match parsed {
            Ok(point) => points.push(point),
            Err(e) => match mode {
                ParseMode::Strict => return Err(e),
                ParseMode::Lenient => skipped.push(RowIssue {
                    line,
                    message: e.to_string(),
                }),
            },
        }
    }
    let provenance = format!(
        "numeric csv {} rows={} skipped={}",
        path.display(),
        points.len(),
        skipped.len()
    );
    Ok(CatalogLoad {
        dataset: Dataset::new(points, None, provenance),
        skipped,
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    Ok(BufWriter::new(File::create(path).map_err(|source| {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    })?))
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Writes the curve's vertices as CSV rows
/// `index,lambda,x,y,z,lon_deg,lat_deg` with a header.
pub fn export_curve_csv(curve: &Curve, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    writeln!(w, "index,lambda,x,y,z,lon_deg,lat_deg").map_err(io_err(path))?;
    for (i, (v, lambda)) in curve.vertices().iter().zip(curve.lambdas()).enumerate() {
        let (lon, lat) = v.to_lonlat_deg();
        writeln!(
            w,
            "{i},{lambda:.17},{:.17},{:.17},{:.17},{lon:.12},{lat:.12}",
            v.x, v.y, v.z
        )
        .map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Writes a dataset as plain `x,y,z` rows loadable as `xyz-csv`.
pub fn export_dataset_xyz(dataset: &Dataset, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    for p in dataset.points() {
        writeln!(w, "{:.17},{:.17},{:.17}", p.x, p.y, p.z).map_err(io_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

/// Writes an RFC 7946 FeatureCollection: the curve as a LineString (closed
/// curves repeat the first vertex) and the projection feet as a MultiPoint,
/// coordinates `[lon, lat]` in degrees.
pub fn export_geojson(
    curve: &Curve,
    projections: &[ProjectionResult],
    path: &Path,
) -> Result<()> {
    let mut line: Vec<[f64; 2]> = curve
        .vertices()
        .iter()
        .map(|v| {
            let (lon, lat) = v.to_lonlat_deg();
            [lon, lat]
        })
        .collect();
    if curve.is_closed() {
        if let Some(first) = line.first().copied() {
            line.push(first);
        }
    }
    let feet: Vec<[f64; 2]> = projections
        .iter()
        .map(|p| {
            let (lon, lat) = p.foot.to_lonlat_deg();
            [lon, lat]
        })
        .collect();
    let doc = serde_json::json!({
        "type": "FeatureCollection",
        "features": [
            {
                "type": "Feature",
                "properties": {"kind": "curve", "closed": curve.is_closed()},
                "geometry": {"type": "LineString", "coordinates": line},
            },
            {
                "type": "Feature",
                "properties": {"kind": "projection-feet"},
                "geometry": {"type": "MultiPoint", "coordinates": feet},
            },
        ],
    });
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(e),
    })?;
    w.flush().map_err(io_err(path))
}

/// One exported vertex of a fitted curve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexRecord {
    pub index: usize,
    pub lambda: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
    pub lon_deg: f64,
    pub lat_deg: f64,
}

/// Summary metrics of a fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Metrics {
    pub reconstruction_error: f64,
    pub distinct_projections: usize,
    pub n_points: usize,
    pub curve_length: f64,
    pub closed: bool,
}

/// The machine-readable fit report written by the CLI. The key set —
/// `config`, `delta_history`, `iterations`, `converged`, `vertices`,
/// `projections`, `metrics` — is stable.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub config: serde_json::Value,
    pub delta_history: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    pub vertices: Vec<VertexRecord>,
    pub projections: Vec<ProjectionResult>,
    pub metrics: Metrics,
}

impl RunReport {
    /// Assembles the report from a fit and the fully-resolved config echo.
    pub fn from_fit(report: &FitReport, config: serde_json::Value, n_points: usize) -> Self {
        let vertices = report
            .final_curve
            .vertices()
            .iter()
            .zip(report.final_curve.lambdas())
            .enumerate()
            .map(|(index, (v, &lambda))| {
                let (lon_deg, lat_deg) = v.to_lonlat_deg();
                VertexRecord {
                    index,
                    lambda,
                    x: v.x,
                    y: v.y,
                    z: v.z,
                    lon_deg,
                    lat_deg,
                }
            })
            .collect();
        Self {
            config,
            delta_history: report.delta_history.clone(),
            iterations: report.iterations,
            converged: report.converged,
            vertices,
            projections: report.projections.clone(),
            metrics: Metrics {
                reconstruction_error: *report.delta_history.last().unwrap(),
                distinct_projections: report.distinct_projections,
                n_points,
                curve_length: report.final_curve.total_length(),
                closed: report.final_curve.is_closed(),
            },
        }
    }

    /// Rebuilds the fitted curve from the exported vertices.
    pub fn curve(&self) -> Result<Curve> {
        let vertices: Vec<UnitVec3> = self
            .vertices
            .iter()
            .map(|v| UnitVec3::new(v.x, v.y, v.z))
            .collect::<Result<_>>()?;
        crate::pcurve::reparameterize_unit_speed(&vertices, self.metrics.closed)
    }
}

pub fn export_report(report: &RunReport, path: &Path) -> Result<()> {
    let mut w = create(path)?;
    serde_json::to_writer_pretty(&mut w, report).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        source: std::io::Error::other(e),
    })?;
    w.flush().map_err(io_err(path))
}

pub fn load_report(path: &Path) -> Result<RunReport> {
    let file = File::open(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::Parse {
        path: path.to_path_buf(),
        line: e.line(),
        message: e.to_string(),
    })
}
