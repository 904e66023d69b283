//! Numerical ranges of complex matrices.
//!
//! The crate traces the boundary of `W(A) = { <Af, f> : |f| = 1 }` through
//! its support function, estimates the lower and upper curvature of the
//! boundary at a point, detects corners and checks the classical spectral
//! inclusion results for boundary points on concrete matrices.

pub mod config;
pub mod curvature;
pub mod document;
pub mod error;
pub mod linalg;
pub mod range;
pub mod verify;

pub use config::RunConfig;
pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, Spectrum, UnitVector};
pub use num_complex::Complex64;
