use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Every tolerance used by the boundary, curvature and verification
/// routines. Tolerances marked "relative" are multiplied by the matrix
/// scale (spectral norm) before use.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct RunConfig {
    /// Relative inner/outer gap below which adjacent boundary samples are
    /// not bisected further.
    pub refine_tol: f64,
    /// Number of dyadic scales `scale * 2^-k`, `k = 1..=num_scales`.
    pub num_scales: usize,
    /// Minimum per-scale growth factor of the ratio tail to flag divergence.
    pub divergence_growth: f64,
    /// Minimum ratio at the finest scale to flag divergence.
    pub divergence_floor: f64,
    /// Normal-cone width above which a boundary point counts as a corner.
    pub angular_tol: f64,
    pub seed: u64,
    pub initial_angles: usize,
    /// Assumed relative eigensolver accuracy; the finest trusted scale is
    /// `sqrt(eig_eps) * scale`.
    pub eig_eps: f64,
    /// Relative noise floor below which a normalized height counts as zero.
    pub flat_floor: f64,
    /// Relative distance under which two boundary points are identified.
    pub point_tol: f64,
    /// Number of finest scales forming the ratio tail.
    pub tail_len: usize,
    /// Relative eigen-residual accepted as "is an eigenvalue".
    pub residual_tol: f64,
    /// Relative distance accepted for "lies on the ellipse boundary".
    pub ellipse_boundary_tol: f64,
    /// Relative tolerance for ellipse-in-range membership.
    pub ellipse_contain_tol: f64,
    /// Relative minimum curvature radius of a witness ellipse at the
    /// touching point.
    pub ellipse_min_radius: f64,
    /// Number of uniformly spaced normal angles checked per matrix.
    pub check_angles: usize,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            refine_tol: 1e-8,
            num_scales: 40,
            divergence_growth: 1.2,
            divergence_floor: 1e3,
            angular_tol: 1e-6,
            seed: 0,
            initial_angles: 16,
            eig_eps: 1e-12,
            flat_floor: 64.0 * f64::EPSILON,
            point_tol: 1e-13,
            tail_len: 3,
            residual_tol: 1e-7,
            ellipse_boundary_tol: 1e-6,
            ellipse_contain_tol: 1e-7,
            ellipse_min_radius: 1e-3,
            check_angles: 16,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("refine_tol", self.refine_tol),
            ("divergence_growth", self.divergence_growth),
            ("divergence_floor", self.divergence_floor),
            ("angular_tol", self.angular_tol),
            ("eig_eps", self.eig_eps),
            ("flat_floor", self.flat_floor),
            ("point_tol", self.point_tol),
            ("residual_tol", self.residual_tol),
            ("ellipse_boundary_tol", self.ellipse_boundary_tol),
            ("ellipse_contain_tol", self.ellipse_contain_tol),
            ("ellipse_min_radius", self.ellipse_min_radius),
        ];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::Config(format!("{name} must be positive, got {value}")));
            }
        }
        if self.num_scales < 8 {
            return Err(Error::Config(format!(
                "num_scales must be >= 8, got {}",
                self.num_scales
            )));
        }
        if self.initial_angles < 8 {
            return Err(Error::Config(format!(
                "initial_angles must be >= 8, got {}",
                self.initial_angles
            )));
        }
        if self.tail_len < 3 {
            return Err(Error::Config(format!("tail_len must be >= 3, got {}", self.tail_len)));
        }
        if self.check_angles == 0 {
            return Err(Error::Config("check_angles must be positive".into()));
        }
        Ok(())
    }
}
