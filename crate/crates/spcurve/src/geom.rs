//! Exact spherical geometry on S²: unit vectors, spherical coordinates,
//! rotations, geodesic interpolation, and the log/exp maps.
//!
//! All angles are radians. Dot products are clamped into [-1, 1] before
//! `acos`, otherwise floating-point drift yields NaN at coincident or
//! antipodal points.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Margin below π under which two points are treated as antipodal and the
/// shortest geodesic as ambiguous.
pub const ANTIPODAL_GAP: f64 = 1e-9;

/// A point on the unit sphere, stored as a unit 3-vector.
///
/// Construction renormalizes, so `x² + y² + z² = 1` holds to machine
/// precision for every value of this type.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitVec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl UnitVec3 {
    /// Builds a unit vector from arbitrary components, renormalizing.
    /// Fails if the norm is below 1e-12.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm < 1e-12 {
            return Err(Error::InvalidCoordinate(format!(
                "cannot normalize ({x}, {y}, {z})"
            )));
        }
        Ok(Self {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    pub const fn x_axis() -> Self {
        Self { x: 1.0, y: 0.0, z: 0.0 }
    }

    pub const fn y_axis() -> Self {
        Self { x: 0.0, y: 1.0, z: 0.0 }
    }

    /// The north pole (0, 0, 1), the base point of the reference log map.
    pub const fn north() -> Self {
        Self { x: 0.0, y: 0.0, z: 1.0 }
    }

    pub fn dot(&self, other: &Self) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    /// Cross product as a raw (non-unit) 3-vector.
    pub fn cross(&self, other: &Self) -> [f64; 3] {
        [
            self.y * other.z - self.z * other.y,
            self.z * other.x - self.x * other.z,
            self.x * other.y - self.y * other.x,
        ]
    }

    pub fn neg(&self) -> Self {
        Self { x: -self.x, y: -self.y, z: -self.z }
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    /// Longitude/latitude in degrees, longitude in (-180, 180].
    pub fn to_lonlat_deg(&self) -> (f64, f64) {
        let lat = self.z.clamp(-1.0, 1.0).asin().to_degrees();
        let mut lon = self.y.atan2(self.x).to_degrees();
        if lon <= -180.0 {
            lon += 360.0;
        }
        (lon, lat)
    }
}

/// Spherical coordinates: azimuth `theta` in [0, 2π), polar angle `rho`
/// in [0, π] measured from the north pole.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SphCoord {
    pub theta: f64,
    pub rho: f64,
}

/// A proper rotation of 3-space (orthogonal, determinant +1).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Rotation3 {
    /// Row-major 3×3 matrix.
    pub m: [[f64; 3]; 3],
}

impl Rotation3 {
    pub fn identity() -> Self {
        Self {
            m: [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]],
        }
    }

    pub fn apply(&self, v: &UnitVec3) -> UnitVec3 {
        let [x, y, z] = self.apply_raw(&v.as_array());
        // Orthogonal matrices preserve the norm up to rounding, so this
        // normalization cannot fail.
        UnitVec3::new(x, y, z).expect("rotation of a unit vector")
    }

    pub fn apply_raw(&self, v: &[f64; 3]) -> [f64; 3] {
        let m = &self.m;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    /// The inverse rotation (transpose).
    pub fn transpose(&self) -> Self {
        let m = &self.m;
        Self {
            m: [
                [m[0][0], m[1][0], m[2][0]],
                [m[0][1], m[1][1], m[2][1]],
                [m[0][2], m[1][2], m[2][2]],
            ],
        }
    }

    /// `self ∘ other`: applies `other` first.
    pub fn compose(&self, other: &Self) -> Self {
        let a = &self.m;
        let b = &other.m;
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
            }
        }
        Self { m }
    }
}

/// Coordinates in the tangent plane at a base point, in radians of arc.
///
/// The axes are those of the rotated frame used by [`log_map`]: the frame in
/// which the base point sits at the north pole, `u` along the rotated x-axis
/// and `v` along the rotated y-axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tangent2 {
    pub u: f64,
    pub v: f64,
}

impl Tangent2 {
    pub fn norm(&self) -> f64 {
        (self.u * self.u + self.v * self.v).sqrt()
    }
}

/// Converts geographic degrees to a unit vector. Longitude is wrapped
/// mod 360; latitude must lie in [-90, 90].
pub fn lonlat_to_unit(lon_deg: f64, lat_deg: f64) -> Result<UnitVec3> {
    if !lon_deg.is_finite() || !lat_deg.is_finite() {
        return Err(Error::InvalidCoordinate(format!(
            "non-finite lon/lat ({lon_deg}, {lat_deg})"
        )));
    }
    if !(-90.0..=90.0).contains(&lat_deg) {
        return Err(Error::InvalidCoordinate(format!(
            "latitude {lat_deg} outside [-90, 90]"
        )));
    }
    let lon = lon_deg.rem_euclid(360.0).to_radians();
    let lat = lat_deg.to_radians();
    UnitVec3::new(lat.cos() * lon.cos(), lat.cos() * lon.sin(), lat.sin())
}

/// Spherical coordinates of a point; at the poles `theta` is set to 0.
pub fn to_spherical(p: &UnitVec3) -> SphCoord {
    let rho = p.z.clamp(-1.0, 1.0).acos();
    let theta = if p.x == 0.0 && p.y == 0.0 {
        0.0
    } else {
        let t = p.y.atan2(p.x);
        let t = if t < 0.0 { t + 2.0 * PI } else { t };
        if t >= 2.0 * PI {
            0.0
        } else {
            t
        }
    };
    SphCoord { theta, rho }
}

pub fn from_spherical(c: &SphCoord) -> UnitVec3 {
    let (st, ct) = c.theta.sin_cos();
    let (sr, cr) = c.rho.sin_cos();
    UnitVec3::new(sr * ct, sr * st, cr).expect("spherical coordinates of a unit point")
}

/// Geodesic (great-circle) distance in [0, π].
pub fn geodesic_distance(a: &UnitVec3, b: &UnitVec3) -> f64 {
    a.dot(b).clamp(-1.0, 1.0).acos()
}

/// Euclidean (chord) distance between two unit vectors. Equal to the
/// geodesic distance to second order for small separations, without the
/// ~1.5e-8 resolution floor of `arccos` near coincident points.
pub fn chord_distance(a: &UnitVec3, b: &UnitVec3) -> f64 {
    let d = [a.x - b.x, a.y - b.y, a.z - b.z];
    (d[0] * d[0] + d[1] * d[1] + d[2] * d[2]).sqrt()
}

/// The point at signed fraction `eps` along the geodesic from `a` to `b`:
/// `d_geo(a, result) = |eps| · d_geo(a, b)`, with negative `eps` moving away
/// from `b`. Errors when `a` and `b` are antipodal within [`ANTIPODAL_GAP`].
pub fn geodesic_point(a: &UnitVec3, b: &UnitVec3, eps: f64) -> Result<UnitVec3> {
    let d = geodesic_distance(a, b);
    if d >= PI - ANTIPODAL_GAP {
        return Err(Error::AmbiguousGeodesic);
    }
    if eps == 0.0 {
        return Ok(*a);
    }
    if eps == 1.0 {
        return Ok(*b);
    }
    if d < 1e-15 {
        return Ok(*a);
    }
    // Unit tangent at a toward b; its norm is sin(d) > 0 here.
    let c = a.dot(b);
    let t = [b.x - c * a.x, b.y - c * a.y, b.z - c * a.z];
    let tn = (t[0] * t[0] + t[1] * t[1] + t[2] * t[2]).sqrt();
    let (s, k) = (eps * d).sin_cos();
    UnitVec3::new(
        k * a.x + s * t[0] / tn,
        k * a.y + s * t[1] / tn,
        k * a.z + s * t[2] / tn,
    )
}

/// The minimal rotation carrying `from` onto `to`.
///
/// For antipodal inputs the rotation is by π about a deterministically
/// chosen axis orthogonal to `from`: the normalized projection of (0,0,1)
/// onto the orthogonal complement of `from`, or of (1,0,0) when `from` is
/// within rounding of ±(0,0,1).
pub fn rotation_taking(from: &UnitVec3, to: &UnitVec3) -> Rotation3 {
    let c = from.dot(to).clamp(-1.0, 1.0);
    if c <= -1.0 + 1e-12 {
        let axis = orthogonal_projection_axis(from);
        let a = axis.as_array();
        let mut m = [[0.0; 3]; 3];
        for (i, row) in m.iter_mut().enumerate() {
            for (j, cell) in row.iter_mut().enumerate() {
                *cell = 2.0 * a[i] * a[j] - if i == j { 1.0 } else { 0.0 };
            }
        }
        return Rotation3 { m };
    }
    // R = I + [v]× + [v]×² / (1 + c), exact for c > -1.
    let v = from.cross(to);
    let k = 1.0 / (1.0 + c);
    let (vx, vy, vz) = (v[0], v[1], v[2]);
    Rotation3 {
        m: [
            [
                1.0 + k * (-vz * vz - vy * vy),
                -vz + k * vx * vy,
                vy + k * vx * vz,
            ],
            [
                vz + k * vx * vy,
                1.0 + k * (-vz * vz - vx * vx),
                -vx + k * vy * vz,
            ],
            [
                -vy + k * vx * vz,
                vx + k * vy * vz,
                1.0 + k * (-vy * vy - vx * vx),
            ],
        ],
    }
}

/// Unit axis orthogonal to `from`, chosen deterministically.
fn orthogonal_projection_axis(from: &UnitVec3) -> UnitVec3 {
    let z = UnitVec3::north();
    let d = from.dot(&z);
    let proj = [z.x - d * from.x, z.y - d * from.y, z.z - d * from.z];
    let n2 = proj[0] * proj[0] + proj[1] * proj[1] + proj[2] * proj[2];
    if n2 > 1e-12 {
        return UnitVec3::new(proj[0], proj[1], proj[2]).expect("nonzero projection");
    }
    let x = UnitVec3::x_axis();
    let d = from.dot(&x);
    UnitVec3::new(x.x - d * from.x, x.y - d * from.y, x.z - d * from.z)
        .expect("x-axis projection nonzero when from is near ±z")
}

/// Log map at `base`: the tangent coordinates of `p` such that
/// `‖log_map(base, p)‖ = d_geo(base, p)`. Errors for antipodal `p`.
pub fn log_map(base: &UnitVec3, p: &UnitVec3) -> Result<Tangent2> {
    if geodesic_distance(base, p) >= PI - ANTIPODAL_GAP {
        return Err(Error::AmbiguousGeodesic);
    }
    let r = rotation_taking(base, &UnitVec3::north());
    let q = r.apply(p);
    let theta = q.z.clamp(-1.0, 1.0).acos();
    let s = theta.sin();
    let factor = if s > 1e-300 { theta / s } else { 1.0 };
    Ok(Tangent2 {
        u: q.x * factor,
        v: q.y * factor,
    })
}

/// Exp map at `base`: inverse of [`log_map`] for `‖t‖ < π`.
pub fn exp_map(base: &UnitVec3, t: &Tangent2) -> Result<UnitVec3> {
    let norm = t.norm();
    if norm >= PI {
        return Err(Error::OutOfInjectivityRadius { norm });
    }
    if norm < 1e-300 {
        return Ok(*base);
    }
    let (s, c) = norm.sin_cos();
    let q = [t.u * s / norm, t.v * s / norm, c];
    let r = rotation_taking(base, &UnitVec3::north()).transpose();
    let [x, y, z] = r.apply_raw(&q);
    UnitVec3::new(x, y, z)
}

/// Orthonormal tangent basis at `base` as ambient 3-vectors; the returned
/// pair corresponds to the `(u, v)` coordinates of [`Tangent2`].
pub fn tangent_basis(base: &UnitVec3) -> (UnitVec3, UnitVec3) {
    let r = rotation_taking(base, &UnitVec3::north()).transpose();
    (r.apply(&UnitVec3::x_axis()), r.apply(&UnitVec3::y_axis()))
}
