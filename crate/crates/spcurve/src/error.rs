//! Crate-wide error type.

use std::path::PathBuf;

/// Errors surfaced by the geometry, estimation, fitting, and I/O layers.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Longitude/latitude input was non-finite or out of range.
    #[error("invalid coordinate: {0}")]
    InvalidCoordinate(String),

    /// The shortest geodesic between two points is not unique
    /// (the points are antipodal within tolerance).
    #[error("ambiguous geodesic: endpoints are antipodal within tolerance")]
    AmbiguousGeodesic,

    /// A tangent vector reached or exceeded the injectivity radius π.
    #[error("tangent vector norm {norm} is outside the injectivity radius pi")]
    OutOfInjectivityRadius { norm: f64 },

    /// The weighted resultant vanished; the extrinsic mean is undefined.
    #[error("degenerate mean: weighted resultant has near-zero norm")]
    DegenerateMean,

    /// Input does not carry enough structure for the requested fit.
    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    /// A curve collapsed to (nearly) a single point.
    #[error("degenerate curve: all vertices coincide")]
    DegenerateCurve,

    /// File system failure, annotated with the offending path.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// A row of an input file could not be parsed.
    #[error("parse error in {path} at line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    /// A required header column is missing from a catalog file.
    #[error("missing column `{column}` in {path}")]
    MissingColumn { path: PathBuf, column: String },
}

pub type Result<T> = std::result::Result<T, Error>;
