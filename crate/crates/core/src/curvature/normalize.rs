use num_complex::Complex64;
use serde::Serialize;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::range::BoundaryCurve;

/// Boundary samples in canonical position: the base point at the origin,
/// the supporting line along the real axis and the body above it.
#[derive(Debug, Clone, Serialize)]
pub struct NormalizedBoundary {
    pub base_point: Complex64,
    pub base_theta: f64,
    /// `(x, y)` pairs sorted by `x`.
    pub samples: Vec<(f64, f64)>,
    /// Length unit for the dyadic scales (the matrix norm).
    pub scale: f64,
    /// Heights at or below this absolute value count as zero.
    pub noise_floor: f64,
    /// Smallest `|x|` trusted unconditionally (absolute).
    pub finest_scale: f64,
    /// Below `finest_scale` a height is trusted only while it is at least
    /// this large (absolute). Zero disables the finer scales.
    pub resolve_floor: f64,
}

/// `w = -i e^{-i theta0} (z - lambda)` as `(Re w, Im w)`.
pub fn to_normalized(z: Complex64, base: Complex64, theta0: f64) -> (f64, f64) {
    let w = Complex64::new(0.0, -1.0) * Complex64::from_polar(1.0, -theta0) * (z - base);
    (w.re, w.im)
}

impl NormalizedBoundary {
    /// Builds a normalized body from raw boundary points.
    pub fn from_points(
        base_point: Complex64,
        base_theta: f64,
        points: impl IntoIterator<Item = Complex64>,
        scale: f64,
        noise_floor: f64,
        finest_scale: f64,
    ) -> Self {
        let samples = points
            .into_iter()
            .map(|z| to_normalized(z, base_point, base_theta))
            .collect();
        Self::from_xy(base_point, base_theta, samples, scale, noise_floor, finest_scale)
    }

    pub fn from_xy(
        base_point: Complex64,
        base_theta: f64,
        mut samples: Vec<(f64, f64)>,
        scale: f64,
        noise_floor: f64,
        finest_scale: f64,
    ) -> Self {
        samples.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        samples.dedup();
        NormalizedBoundary {
            base_point,
            base_theta,
            samples,
            scale,
            noise_floor,
            finest_scale,
            resolve_floor: 0.0,
        }
    }

    pub fn with_resolve_floor(mut self, floor: f64) -> Self {
        self.resolve_floor = floor;
        self
    }

    /// Most negative height, which should be at rounding level.
    pub fn min_height(&self) -> f64 {
        self.samples.iter().map(|s| s.1).fold(f64::INFINITY, f64::min)
    }

    /// Adds more boundary points (e.g. from local refinement).
    pub fn extend(&mut self, points: impl IntoIterator<Item = Complex64>) {
        let (base, theta) = (self.base_point, self.base_theta);
        self.samples.extend(points.into_iter().map(|z| to_normalized(z, base, theta)));
        self.samples.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
        self.samples.dedup();
    }
}

/// Noise floor, finest unconditional scale and resolve floor of a matrix
/// curve.
pub(crate) fn curve_floors(curve: &BoundaryCurve, cfg: &RunConfig) -> (f64, f64, f64) {
    let scale = curve.scale();
    (cfg.flat_floor * scale, cfg.eig_eps.sqrt() * scale, cfg.eig_eps * scale)
}

/// Canonical position of the curve at the boundary point with outward
/// normal `theta0`.
pub fn normalize_at(curve: &BoundaryCurve, theta0: f64) -> Result<NormalizedBoundary> {
    normalize_at_with(curve, theta0, &RunConfig::default())
}

pub fn normalize_at_with(curve: &BoundaryCurve, theta0: f64, cfg: &RunConfig) -> Result<NormalizedBoundary> {
    if curve.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let base = curve.sample_at(theta0)?;
    normalize_at_point(curve, base.theta, base.point, cfg)
}

/// Canonical position at an explicitly given boundary point `lambda` whose
/// outward normal is `theta0` (e.g. the midpoint of a flat edge).
pub fn normalize_at_point(
    curve: &BoundaryCurve,
    theta0: f64,
    lambda: Complex64,
    cfg: &RunConfig,
) -> Result<NormalizedBoundary> {
    if curve.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let (floor, finest, resolve) = curve_floors(curve, cfg);
    let points = curve.samples.iter().map(|s| s.point).chain(std::iter::once(lambda));
    Ok(NormalizedBoundary::from_points(lambda, theta0, points, curve.scale(), floor, finest).with_resolve_floor(resolve))
}
