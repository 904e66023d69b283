use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::range::{wrap_angle, BoundaryCurve};

/// Relative distance below which a point counts as lying on the boundary.
const ON_BOUNDARY_TOL: f64 = 1e-6;
/// Bisection steps when pinning an edge of the normal cone.
const PIN_STEPS: usize = 64;

/// Outcome of the corner test at a boundary point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CornerTest {
    pub point: Complex64,
    pub is_corner: bool,
    /// Width of the set of outward normals at the point.
    pub normal_cone_width: f64,
    /// First and last normal angle of the cone (cone start may exceed the
    /// end when the cone wraps through zero).
    pub cone: (f64, f64),
}

impl CornerTest {
    /// Opening angle of the tangent sector, `pi - normal_cone_width`.
    pub fn interior_angle(&self) -> f64 {
        PI - self.normal_cone_width
    }

    /// Normal at the middle of the cone.
    pub fn mid_normal(&self) -> f64 {
        let (a, _) = self.cone;
        wrap_angle(a + 0.5 * self.normal_cone_width)
    }
}

/// Measures the normal cone of `W(A)` at `lambda`: the angles whose support
/// point coincides with `lambda` within `tol`. A cone wider than
/// `angular_tol` makes `lambda` a corner.
pub fn detect_corner(curve: &BoundaryCurve, lambda: Complex64, tol: f64, angular_tol: f64) -> Result<CornerTest> {
    if curve.is_empty() {
        return Err(Error::EmptyCurve);
    }
    let n = curve.len();
    let samples = &curve.samples;
    let excess = curve.support_excess(lambda);
    if excess < -ON_BOUNDARY_TOL * curve.scale() || excess > ON_BOUNDARY_TOL * curve.scale() {
        return Err(Error::NotOnBoundary {
            point: lambda,
            distance: excess.abs(),
        });
    }
    let matches = |z: Complex64| (z - lambda).norm() <= tol;

    let seed = match (0..n).find(|&k| matches(samples[k].point)) {
        Some(k) => samples[k].theta,
        None => match probe_between_samples(curve, lambda, &matches)? {
            Some(theta) => theta,
            None => {
                return Ok(CornerTest {
                    point: lambda,
                    is_corner: false,
                    normal_cone_width: 0.0,
                    cone: (0.0, 0.0),
                })
            }
        },
    };

    if samples.iter().all(|s| matches(s.point)) {
        return Ok(CornerTest {
            point: lambda,
            is_corner: true,
            normal_cone_width: TAU,
            cone: (0.0, TAU),
        });
    }

    // Walk outwards over the samples, measuring angles relative to the seed.
    let rel = |theta: f64| (theta - seed).rem_euclid(TAU);
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| rel(samples[a].theta).total_cmp(&rel(samples[b].theta)));

    // Upper edge: last matching offset before the first non-matching one.
    let mut hi_in = 0.0;
    let mut hi_out = TAU;
    for &k in &order {
        let r = rel(samples[k].theta);
        if matches(samples[k].point) {
            hi_in = r;
        } else {
            hi_out = r;
            break;
        }
    }
    // Lower edge, walking backwards (offsets measured as negative).
    let mut lo_in = 0.0;
    let mut lo_out = -TAU;
    for &k in order.iter().rev() {
        let r = rel(samples[k].theta) - TAU;
        if r == -TAU {
            continue;
        }
        if matches(samples[k].point) {
            lo_in = r;
        } else {
            lo_out = r;
            break;
        }
    }
    let hi = pin(curve, seed, hi_in, hi_out, &matches, angular_tol)?;
    let lo = pin(curve, seed, lo_in, lo_out, &matches, angular_tol)?;
    let width = (hi - lo).min(TAU);
    Ok(CornerTest {
        point: lambda,
        is_corner: width > angular_tol,
        normal_cone_width: width,
        cone: (wrap_angle(seed + lo), wrap_angle(seed + hi)),
    })
}

/// Bisects between a matching offset and a non-matching one.
fn pin(
    curve: &BoundaryCurve,
    seed: f64,
    mut inside: f64,
    mut outside: f64,
    matches: &impl Fn(Complex64) -> bool,
    angular_tol: f64,
) -> Result<f64> {
    let resolution = (angular_tol * 1e-3).max(1e-15);
    for _ in 0..PIN_STEPS {
        if (outside - inside).abs() <= resolution {
            break;
        }
        let mid = 0.5 * (inside + outside);
        if matches(curve.sample_at(seed + mid)?.point) {
            inside = mid;
        } else {
            outside = mid;
        }
    }
    Ok(inside)
}

/// Golden-section search, between the samples around the best-supported
/// one, for a normal whose support point is `lambda`.
fn probe_between_samples(
    curve: &BoundaryCurve,
    lambda: Complex64,
    matches: &impl Fn(Complex64) -> bool,
) -> Result<Option<f64>> {
    let n = curve.len();
    let samples = &curve.samples;
    let score = |theta: f64| (Complex64::from_polar(1.0, -theta) * lambda).re;
    let best = (0..n)
        .max_by(|&a, &b| {
            let ea = score(samples[a].theta) - samples[a].support_value;
            let eb = score(samples[b].theta) - samples[b].support_value;
            ea.total_cmp(&eb)
        })
        .expect("curve is nonempty");
    let lo_theta = samples[(best + n - 1) % n].theta;
    let mut lo = samples[best].theta - (samples[best].theta - lo_theta).rem_euclid(TAU);
    let mut hi = samples[best].theta + (samples[(best + 1) % n].theta - samples[best].theta).rem_euclid(TAU);
    // Maximize Re(e^{-i t} lambda) - h(t); zero exactly on the normal cone.
    let excess = |t: f64| -> Result<f64> { Ok(score(t) - curve.sample_at(t)?.support_value) };
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let mut f1 = excess(x1)?;
    let mut f2 = excess(x2)?;
    for _ in 0..80 {
        if f1 > f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = excess(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = excess(x2)?;
        }
    }
    let theta = 0.5 * (lo + hi);
    Ok(matches(curve.sample_at(theta)?.point).then(|| wrap_angle(theta)))
}
