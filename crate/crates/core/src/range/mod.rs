//! The numerical range `W(A)` through its support function
//! `h(theta) = lambda_max(Re(e^{-i theta} A))`.

mod curve;
mod ellipse;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_part, hermitian_top_with_gap, inner, ComplexMatrix, UnitVector};

pub use curve::{boundary_curve, contains, BoundaryCurve, FlatEdge};
pub use ellipse::{compression_ellipse, compression_ellipse_with_norm, Ellipse};

/// `<Af, f>`.
pub fn rayleigh(a: &ComplexMatrix, f: &UnitVector) -> Result<Complex64> {
    if f.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            got: f.dim(),
        });
    }
    Ok(inner(&a.mul_vec(f.as_slice()), f.as_slice()))
}

/// Wraps an angle into `[0, 2 pi)`.
pub fn wrap_angle(theta: f64) -> f64 {
    let t = theta.rem_euclid(TAU);
    if t >= TAU {
        0.0
    } else {
        t
    }
}

/// One boundary point of `W(A)` together with the unit vector attaining it.
#[derive(Debug, Clone, Serialize)]
pub struct BoundarySample {
    /// Outward normal angle in `[0, 2 pi)`.
    pub theta: f64,
    /// `h(theta)`.
    pub support_value: f64,
    pub point: Complex64,
    #[serde(skip)]
    pub witness: UnitVector,
    /// Gap between the two largest eigenvalues of the Hermitian part; zero
    /// (up to rounding) where the supporting line meets a flat edge.
    pub eigen_gap: f64,
}

pub fn support_function(a: &ComplexMatrix, theta: f64) -> Result<BoundarySample> {
    let theta = wrap_angle(theta);
    let h = hermitian_part(a, theta);
    let (support_value, witness, eigen_gap) = hermitian_top_with_gap(&h)?;
    let point = rayleigh(a, &witness)?;
    Ok(BoundarySample {
        theta,
        support_value,
        point,
        witness,
        eigen_gap,
    })
}
