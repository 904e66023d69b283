use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;
use serde::Serialize;

use super::corner::{detect_corner, CornerTest};
use super::estimate::{curvature_estimate_with, CurvatureEstimate, ScaleRatio};
use super::normalize::{normalize_at_point, NormalizedBoundary};
use crate::config::RunConfig;
use crate::error::Result;
use crate::range::BoundaryCurve;

/// Smallest angular offset used by the local refinement.
const MIN_OFFSET: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Corner,
    InfiniteCurvature,
    InfiniteUpperCurvatureOnly,
    Round,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Corner => "corner",
            Verdict::InfiniteCurvature => "infinite-curvature",
            Verdict::InfiniteUpperCurvatureOnly => "infinite-upper-curvature-only",
            Verdict::Round => "round",
        }
    }

    /// Everything except `Round` has infinite upper curvature.
    pub fn is_flagged(self) -> bool {
        self != Verdict::Round
    }

    pub fn has_infinite_curvature(self) -> bool {
        matches!(self, Verdict::Corner | Verdict::InfiniteCurvature)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct PointClassification {
    pub theta: f64,
    pub point: Complex64,
    pub verdict: Verdict,
    pub corner: CornerTest,
    pub estimate: CurvatureEstimate,
}

impl PointClassification {
    pub fn normal_cone_width(&self) -> f64 {
        self.corner.normal_cone_width
    }

    /// Finest ratios on each side, finest last.
    pub fn ratio_tail(&self, len: usize) -> (Vec<ScaleRatio>, Vec<ScaleRatio>) {
        (
            self.estimate.left.tail(len).to_vec(),
            self.estimate.right.tail(len).to_vec(),
        )
    }
}

fn verdict_of(corner: bool, est: &CurvatureEstimate) -> Verdict {
    if corner {
        Verdict::Corner
    } else if est.gamma_l_infinite {
        Verdict::InfiniteCurvature
    } else if est.gamma_u_infinite {
        Verdict::InfiniteUpperCurvatureOnly
    } else {
        Verdict::Round
    }
}

/// Boundary points at normals `theta0 +- delta`, `delta` running through
/// half-octaves from `pi/2` downwards. Consecutive points whose distances to
/// `base` differ by more than a factor 2 are separated by bisecting `delta`
/// geometrically, so every dyadic cell the estimator reads gets a point.
/// Each side stops once the points are below every usable scale, or stay
/// put over offsets smaller than the corner tolerance.
pub fn local_points(curve: &BoundaryCurve, theta0: f64, base: Complex64, cfg: &RunConfig) -> Result<Vec<Complex64>> {
    let scale = curve.scale();
    let finest = cfg.eig_eps.sqrt() * scale;
    let resolve = cfg.eig_eps * scale;
    let smallest = scale * (-(cfg.num_scales as f64)).exp2();
    let same = cfg.point_tol * scale;
    let normal = Complex64::from_polar(1.0, -theta0);
    // Distance to base and height above the supporting line.
    let measure = |z: Complex64| ((z - base).norm(), (normal * (base - z)).re);
    let mut out = Vec::new();
    for sign in [1.0, -1.0] {
        let at = |delta: f64| -> Result<Complex64> { Ok(curve.sample_at(theta0 + sign * delta)?.point) };
        let mut prev: Option<(f64, Complex64)> = None;
        let mut repeats = 0;
        let mut j = 0;
        loop {
            let delta = FRAC_PI_2 * (-(j as f64) / 2.0).exp2();
            if delta < MIN_OFFSET {
                break;
            }
            let z = at(delta)?;
            if let Some((pd, pz)) = prev {
                fill_gap(&at, pd, pz, delta, z, base, smallest, 0, &mut out)?;
                if delta < cfg.angular_tol && (z - pz).norm() <= same {
                    repeats += 1;
                } else {
                    repeats = 0;
                }
            }
            out.push(z);
            let (dist, height) = measure(z);
            if dist < 0.25 * smallest || (dist < finest && height < 0.0625 * resolve) || repeats >= 3 {
                break;
            }
            prev = Some((delta, z));
            j += 1;
        }
    }
    Ok(out)
}

const FILL_DEPTH: usize = 24;

#[allow(clippy::too_many_arguments)]
fn fill_gap(
    at: &impl Fn(f64) -> Result<Complex64>,
    d_hi: f64,
    z_hi: Complex64,
    d_lo: f64,
    z_lo: Complex64,
    base: Complex64,
    smallest: f64,
    depth: usize,
    out: &mut Vec<Complex64>,
) -> Result<()> {
    let r_hi = (z_hi - base).norm();
    let r_lo = (z_lo - base).norm();
    if depth >= FILL_DEPTH || r_hi <= 2.0 * r_lo || r_hi < 0.25 * smallest {
        return Ok(());
    }
    let d_mid = (d_hi * d_lo).sqrt();
    let z_mid = at(d_mid)?;
    fill_gap(at, d_hi, z_hi, d_mid, z_mid, base, smallest, depth + 1, out)?;
    out.push(z_mid);
    fill_gap(at, d_mid, z_mid, d_lo, z_lo, base, smallest, depth + 1, out)
}

/// Normalized boundary at `lambda` (outward normal `theta0`) with the
/// curve's samples plus local refinement around `theta0`.
pub fn refined_normalization(
    curve: &BoundaryCurve,
    theta0: f64,
    lambda: Complex64,
    cfg: &RunConfig,
) -> Result<NormalizedBoundary> {
    let mut nb = normalize_at_point(curve, theta0, lambda, cfg)?;
    nb.extend(local_points(curve, theta0, lambda, cfg)?);
    Ok(nb)
}

/// Classifies the boundary point with outward normal `theta0`.
pub fn classify_point(curve: &BoundaryCurve, theta0: f64, cfg: &RunConfig) -> Result<PointClassification> {
    let base = curve.sample_at(theta0)?;
    classify_at(curve, base.theta, base.point, cfg)
}

/// Classifies an explicitly given boundary point `lambda` with outward
/// normal `theta0`.
pub fn classify_at(curve: &BoundaryCurve, theta0: f64, lambda: Complex64, cfg: &RunConfig) -> Result<PointClassification> {
    let scale = curve.scale();
    let corner = detect_corner(curve, lambda, cfg.point_tol * scale, cfg.angular_tol)?;
    if corner.is_corner {
        return Ok(PointClassification {
            theta: theta0,
            point: lambda,
            verdict: Verdict::Corner,
            corner,
            estimate: CurvatureEstimate::corner(),
        });
    }
    let nb = refined_normalization(curve, theta0, lambda, cfg)?;
    let estimate = curvature_estimate_with(&nb, cfg.num_scales, cfg)?;
    Ok(PointClassification {
        theta: theta0,
        point: lambda,
        verdict: verdict_of(false, &estimate),
        corner,
        estimate,
    })
}

/// Classification of a body given only by normalized samples. The corner
/// test looks at the one-sided slopes `y / |x|` on the finest scales: a
/// corner keeps them bounded away from zero.
pub fn classify_normalized(nb: &NormalizedBoundary, cfg: &RunConfig) -> Result<(Verdict, f64, CurvatureEstimate)> {
    let estimate = curvature_estimate_with(nb, cfg.num_scales, cfg)?;
    let slope = |records: &[ScaleRatio]| -> f64 {
        let slopes: Vec<f64> = records.iter().map(|r| r.y / r.x.abs()).collect();
        let steady = slopes.windows(2).all(|w| w[1] >= 0.9 * w[0]);
        match slopes.last() {
            Some(&s) if steady && s > cfg.angular_tol => s,
            _ => 0.0,
        }
    };
    let right = slope(estimate.right.tail(cfg.tail_len));
    let left = slope(estimate.left.tail(cfg.tail_len));
    let width = right.atan() + left.atan();
    let corner = width > cfg.angular_tol;
    let mut estimate = estimate;
    if corner {
        estimate.corner = true;
        estimate.gamma_l_infinite = true;
        estimate.gamma_u_infinite = true;
    }
    Ok((verdict_of(corner, &estimate), width, estimate))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use crate::range::boundary_curve;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn jordan_points_are_round() {
        let curve = boundary_curve(&ComplexMatrix::jordan(2, c(0.0, 0.0)), 16, 1e-8).unwrap();
        let cfg = RunConfig::default();
        for k in 0..5 {
            let p = classify_point(&curve, 0.3 + k as f64, &cfg).unwrap();
            assert_eq!(p.verdict, Verdict::Round);
            assert!((p.estimate.gamma_l_est - 1.0).abs() < 0.05, "{:?}", p.estimate.gamma_l_est);
            assert!((p.estimate.gamma_u_est - 1.0).abs() < 0.05);
        }
    }

    #[test]
    fn triangle_vertex_is_corner() {
        let a = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]);
        let curve = boundary_curve(&a, 16, 1e-8).unwrap();
        let p = classify_point(&curve, -0.3, &RunConfig::default()).unwrap();
        assert_eq!(p.point, c(1.0, 0.0));
        assert_eq!(p.verdict, Verdict::Corner);
        assert_eq!(p.estimate.gamma_l(), f64::INFINITY);
    }

    #[test]
    fn triangle_edge_midpoint_is_flat() {
        let a = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]);
        let curve = boundary_curve(&a, 16, 1e-8).unwrap();
        let p = classify_at(&curve, std::f64::consts::FRAC_PI_4, c(0.5, 0.5), &RunConfig::default()).unwrap();
        assert_eq!(p.verdict, Verdict::Round);
        assert_eq!(p.estimate.gamma_l_est, 0.0);
        assert_eq!(p.estimate.gamma_u_est, 0.0);
    }
}
