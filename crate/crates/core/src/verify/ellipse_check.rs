use num_complex::Complex64;
use serde::Serialize;

use crate::config::RunConfig;
use crate::curvature::{classify_point, PointClassification, Verdict};
use crate::error::Result;
use crate::linalg::{ComplexMatrix, UnitVector};
use crate::range::{boundary_curve, compression_ellipse_with_norm, BoundaryCurve, Ellipse};
use crate::verify::{MatrixAnalysis, PointSource};

/// Points of a candidate ellipse tested against the range.
const CONTAIN_POINTS: usize = 64;
/// Mixing weights `t = 2^-k`, `k = 0..MIX_LEVELS`, tried after `t = 0`.
const MIX_LEVELS: i32 = 16;
/// Relative minor semiaxis at or below which an ellipse is a segment.
const DEGENERATE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum EllipseOutcome {
    Agree,
    Disagree,
    /// Round point for which the search found no witness ellipse.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct EllipseCheck {
    pub theta: f64,
    pub lambda: Complex64,
    pub verdict: Verdict,
    pub outcome: EllipseOutcome,
    /// Witness found by the search, if any.
    pub ellipse: Option<Ellipse>,
    /// Compressions examined.
    pub tried: usize,
    /// Largest support excess of a sampled point of any non-degenerate
    /// compression ellipse over the range (relative); should be at rounding
    /// level since every compression lies inside `W(A)`.
    pub worst_containment: f64,
}

/// Builds the curve, classifies the point with normal `theta0` and runs the
/// ellipse search there.
pub fn ellipse_characterization_check(a: &ComplexMatrix, theta0: f64, cfg: &RunConfig) -> Result<EllipseCheck> {
    let curve = boundary_curve(a, cfg.initial_angles, cfg.refine_tol)?;
    let class = classify_point(&curve, theta0, cfg)?;
    ellipse_check_at(&curve, &class, cfg)
}

/// Searches `f = normalize(v + t w)` for a non-degenerate compression
/// ellipse inside `W(A)` with `lambda` on its boundary, `v` the support
/// witness at the classified normal and `w` running over `e_j` and `i e_j`.
///
/// A witness must also have curvature radius at least
/// `ellipse_min_radius * scale` at the touching point; without that, thin
/// ellipses hugging an edge pass the boundary test at corners.
pub fn ellipse_check_at(curve: &BoundaryCurve, class: &PointClassification, cfg: &RunConfig) -> Result<EllipseCheck> {
    let a = curve.matrix();
    let n = a.dim();
    let scale = curve.scale();
    let sample = curve.sample_at(class.theta)?;
    let lambda = class.point;
    let v = sample.witness.as_slice().to_vec();

    let mut trials: Vec<UnitVector> = vec![sample.witness.clone()];
    for k in 0..MIX_LEVELS {
        let t = (-(k as f64)).exp2();
        for j in 0..n {
            for dir in [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)] {
                let mut f = v.clone();
                f[j] += dir * t;
                if let Some(u) = UnitVector::normalized(f) {
                    trials.push(u);
                }
            }
        }
    }

    let mut tried = 0;
    let mut worst: f64 = 0.0;
    let mut witness = None;
    for f in &trials {
        tried += 1;
        let e = compression_ellipse_with_norm(a, f, curve.matrix_norm)?;
        if e.is_degenerate(DEGENERATE_TOL * scale) {
            continue;
        }
        let excess = e
            .boundary_points(CONTAIN_POINTS)
            .into_iter()
            .map(|p| curve.support_excess(p))
            .fold(f64::NEG_INFINITY, f64::max);
        worst = worst.max(excess / scale);
        if excess > cfg.ellipse_contain_tol * scale {
            continue;
        }
        let (t, dist) = e.nearest_boundary(lambda);
        if dist <= cfg.ellipse_boundary_tol * scale && e.curvature_radius(t) >= cfg.ellipse_min_radius * scale {
            witness = Some(e);
            break;
        }
    }

    let outcome = match (class.verdict, witness.is_some()) {
        (Verdict::Round, true) => EllipseOutcome::Agree,
        (Verdict::Round, false) => EllipseOutcome::Inconclusive,
        (_, true) => EllipseOutcome::Disagree,
        (_, false) => EllipseOutcome::Agree,
    };
    Ok(EllipseCheck {
        theta: class.theta,
        lambda,
        verdict: class.verdict,
        outcome,
        ellipse: witness,
        tried,
        worst_containment: worst,
    })
}

/// Ellipse checks at the fixed-normal points of one analyzed matrix.
#[derive(Debug, Clone, Serialize)]
pub struct EllipseReport {
    pub matrix_id: String,
    pub agree: usize,
    pub disagree: usize,
    pub inconclusive: usize,
    pub worst_containment: f64,
    pub checks: Vec<EllipseCheck>,
}

impl EllipseReport {
    /// No disagreement and every compression inside the range.
    pub fn passed(&self, cfg: &RunConfig) -> bool {
        self.disagree == 0 && self.worst_containment <= cfg.ellipse_contain_tol
    }
}

pub fn ellipse_report(analysis: &MatrixAnalysis, cfg: &RunConfig) -> Result<EllipseReport> {
    let mut r = EllipseReport {
        matrix_id: analysis.matrix_id.clone(),
        agree: 0,
        disagree: 0,
        inconclusive: 0,
        worst_containment: 0.0,
        checks: Vec::new(),
    };
    for p in analysis.points.iter().filter(|p| p.source == PointSource::Uniform) {
        let check = ellipse_check_at(&analysis.curve, &p.classification, cfg)?;
        match check.outcome {
            EllipseOutcome::Agree => r.agree += 1,
            EllipseOutcome::Disagree => r.disagree += 1,
            EllipseOutcome::Inconclusive => r.inconclusive += 1,
        }
        r.worst_containment = r.worst_containment.max(check.worst_containment);
        r.checks.push(check);
    }
    Ok(r)
}
