//! Principal curves on the unit sphere S².
//!
//! The crate fits one-dimensional structure to spherical data by iterating
//! projection and expectation steps over a geodesic polyline. Projection is
//! exact (continuous, per geodesic segment, via rotations), which is what
//! separates the method from nearest-vertex approximations. The pieces:
//!
//! - [`geom`]: spherical primitives — distances, slerp, rotations, log/exp maps.
//! - [`stats`]: extrinsic mean, intrinsic (Karcher) mean, geometric median.
//! - [`circlefit`]: least-squares principal circle (gradient descent in
//!   spherical coordinates) and the tangent-plane PGA great-circle baseline.
//! - [`pcurve`]: geodesic polylines, continuous and nearest-vertex projection,
//!   kernel-weighted expectation, and the fitting loop.
//! - [`eval`]: reconstruction metrics, numerical stationarity checks, and the
//!   seeded Monte Carlo harness.
//! - [`dataio`]: simulated data generators, catalog ingestion, and exports.

pub mod circlefit;
pub mod dataio;
pub mod error;
pub mod eval;
pub mod geom;
pub mod pcurve;
pub mod stats;

#[cfg(test)]
pub(crate) mod testutil;

pub use error::{Error, Result};
