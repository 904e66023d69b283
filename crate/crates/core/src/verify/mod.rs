//! Finite-dimensional checks of the spectral inclusion results for
//! boundary points of `W(A)`, plus the matrix corpus they run on.

mod ellipse_check;
mod generators;

use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

pub use ellipse_check::{
    ellipse_characterization_check, ellipse_check_at, ellipse_report, EllipseCheck, EllipseOutcome, EllipseReport,
};
pub use generators::{
    corner_direct_sum, generator_suite, random_dense, random_hermitian, random_normal, random_unitary,
    roots_of_unity, GeneratedMatrix,
};

use crate::config::RunConfig;
use crate::curvature::{classify_at, PointClassification, Verdict};
use crate::error::Result;
use crate::linalg::{min_residual_witness, spectrum, ComplexMatrix};
use crate::range::{boundary_curve, BoundaryCurve};

/// Shortest flat edge (relative) whose midpoint is checked.
const MIN_EDGE_LEN: f64 = 1e-4;
/// Relative tolerance for a chord to count as a straight boundary piece.
const STRAIGHT_TOL: f64 = 1e-12;
/// Relative support excess under which an eigenvalue is taken to lie on the
/// boundary.
const EIGEN_ON_BOUNDARY: f64 = 1e-9;
/// Fraction of a step by which the uniform check angles are offset from
/// multiples of `2 pi / m`, keeping them off the axis directions.
#[allow(clippy::approx_constant)]
const ANGLE_OFFSET: f64 = 0.318;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    /// Corners of `W(A)` are eigenvalues.
    Donoghue,
    /// Points of infinite upper curvature are eigenvalues.
    Hubner,
    /// Non-corner boundary points of a matrix range have finite upper
    /// curvature.
    Thm3,
}

impl Theorem {
    pub const ALL: [Theorem; 3] = [Theorem::Donoghue, Theorem::Hubner, Theorem::Thm3];

    pub fn as_str(self) -> &'static str {
        match self {
            Theorem::Donoghue => "donoghue",
            Theorem::Hubner => "hubner",
            Theorem::Thm3 => "thm3",
        }
    }

    fn note(self) -> &'static str {
        match self {
            Theorem::Donoghue => "every corner of W(A) must be an eigenvalue",
            Theorem::Hubner => "every boundary point of infinite upper curvature must be an eigenvalue",
            Theorem::Thm3 => {
                "a matrix has empty essential spectrum, so every non-corner boundary point must be round; \
                 a flagged point is an estimator false positive"
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportVerdict {
    Pass,
    Fail,
}

/// Where a checked boundary point came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum PointSource {
    /// A run of boundary samples sharing one point.
    SampleCluster,
    /// An eigenvalue lying on the boundary.
    Eigenvalue,
    /// A fixed normal angle.
    Uniform,
    /// Midpoint of a flat edge.
    EdgeMidpoint,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckedPoint {
    pub lambda: Complex64,
    pub source: PointSource,
    pub classification: PointClassification,
    /// `sigma_min(A - lambda)`.
    pub residual: f64,
    /// Unit vector attaining the residual.
    pub witness: Vec<Complex64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct UnresolvedPoint {
    pub theta: f64,
    pub lambda: Complex64,
    pub source: PointSource,
    pub reason: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Counterexample {
    pub lambda: Complex64,
    pub evidence: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct TheoremReport {
    pub theorem: Theorem,
    pub matrix_id: String,
    pub note: &'static str,
    pub matrix_norm: f64,
    pub checked_points: Vec<CheckedPoint>,
    pub verdict: ReportVerdict,
    pub counterexample: Option<Counterexample>,
    /// Points the classifier could not resolve; they do not affect the
    /// verdict.
    pub unresolved: Vec<UnresolvedPoint>,
}

impl TheoremReport {
    pub fn passed(&self) -> bool {
        self.verdict == ReportVerdict::Pass
    }
}

/// Boundary curve plus every classified boundary point of one matrix.
#[derive(Debug, Clone)]
pub struct MatrixAnalysis {
    pub matrix_id: String,
    pub curve: BoundaryCurve,
    pub points: Vec<CheckedPoint>,
    pub unresolved: Vec<UnresolvedPoint>,
}

struct Candidate {
    theta: f64,
    point: Complex64,
    source: PointSource,
}

fn candidates(curve: &BoundaryCurve, cfg: &RunConfig) -> Result<Vec<Candidate>> {
    let scale = curve.scale();
    let tol = cfg.point_tol * scale;
    let samples = &curve.samples;
    let n = samples.len();
    let mut out = Vec::new();

    // Runs of samples sharing a point: corners.
    if n > 1 {
        let same = |k: usize| (samples[k].point - samples[(k + 1) % n].point).norm() <= tol;
        if (0..n).all(same) {
            out.push(Candidate {
                theta: samples[0].theta,
                point: samples[0].point,
                source: PointSource::SampleCluster,
            });
        } else {
            // Start right after a break so no run wraps around the origin.
            let start = (0..n).find(|&k| !same(k)).map_or(0, |k| (k + 1) % n);
            let mut k = 0;
            while k < n {
                let first = (start + k) % n;
                let mut len = 1;
                while len < n && same((start + k + len - 1) % n) {
                    len += 1;
                }
                if len >= 2 {
                    let mid = (start + k + len / 2) % n;
                    out.push(Candidate {
                        theta: samples[mid].theta,
                        point: samples[first].point,
                        source: PointSource::SampleCluster,
                    });
                }
                k += len;
            }
        }
    }

    // Eigenvalues on the boundary, paired with their best normal.
    if let Ok(spec) = spectrum(curve.matrix()) {
        for &ev in &spec.eigenvalues {
            if curve.support_excess(ev).abs() > EIGEN_ON_BOUNDARY * scale {
                continue;
            }
            let best = samples
                .iter()
                .max_by(|a, b| {
                    let ea = (Complex64::from_polar(1.0, -a.theta) * ev).re - a.support_value;
                    let eb = (Complex64::from_polar(1.0, -b.theta) * ev).re - b.support_value;
                    ea.total_cmp(&eb)
                })
                .expect("curve is nonempty");
            out.push(Candidate {
                theta: best.theta,
                point: ev,
                source: PointSource::Eigenvalue,
            });
        }
    }

    let m = cfg.check_angles;
    for j in 0..m {
        let s = curve.sample_at((j as f64 + ANGLE_OFFSET) * TAU / m as f64)?;
        out.push(Candidate {
            theta: s.theta,
            point: s.point,
            source: PointSource::Uniform,
        });
    }

    for e in curve.flat_edges(MIN_EDGE_LEN * scale, STRAIGHT_TOL * scale)? {
        out.push(Candidate {
            theta: e.theta,
            point: e.midpoint(),
            source: PointSource::EdgeMidpoint,
        });
    }

    // Drop repeats of an earlier candidate.
    let dedup = 1e3 * tol;
    let mut kept: Vec<Candidate> = Vec::with_capacity(out.len());
    for c in out {
        if kept.iter().all(|k| (k.point - c.point).norm() > dedup) {
            kept.push(c);
        }
    }
    Ok(kept)
}

/// Traces the boundary of `W(a)` and classifies its corner candidates,
/// eigenvalues on the boundary, `cfg.check_angles` fixed normals and flat
/// edge midpoints.
pub fn analyze(matrix_id: &str, a: &ComplexMatrix, cfg: &RunConfig) -> Result<MatrixAnalysis> {
    let curve = boundary_curve(a, cfg.initial_angles, cfg.refine_tol)?;
    analyze_curve(matrix_id, curve, cfg)
}

pub fn analyze_curve(matrix_id: &str, curve: BoundaryCurve, cfg: &RunConfig) -> Result<MatrixAnalysis> {
    let mut points = Vec::new();
    let mut unresolved = Vec::new();
    for c in candidates(&curve, cfg)? {
        match classify_at(&curve, c.theta, c.point, cfg) {
            Ok(classification) => {
                let (residual, u) = min_residual_witness(curve.matrix(), c.point)?;
                points.push(CheckedPoint {
                    lambda: c.point,
                    source: c.source,
                    classification,
                    residual,
                    witness: u.into_inner(),
                });
            }
            Err(e) => unresolved.push(UnresolvedPoint {
                theta: c.theta,
                lambda: c.point,
                source: c.source,
                reason: e.to_string(),
            }),
        }
    }
    Ok(MatrixAnalysis {
        matrix_id: matrix_id.to_string(),
        curve,
        points,
        unresolved,
    })
}

impl MatrixAnalysis {
    /// The report for one theorem, built from the shared classification.
    pub fn report(&self, theorem: Theorem, cfg: &RunConfig) -> TheoremReport {
        let scale = self.curve.scale();
        let bound = cfg.residual_tol * scale;
        let relevant = |p: &CheckedPoint| match theorem {
            Theorem::Donoghue => p.classification.verdict == Verdict::Corner,
            Theorem::Hubner => p.classification.verdict.is_flagged(),
            Theorem::Thm3 => p.classification.verdict != Verdict::Corner,
        };
        let checked: Vec<CheckedPoint> = self.points.iter().filter(|p| relevant(p)).cloned().collect();
        let counterexample = checked.iter().find_map(|p| match theorem {
            Theorem::Donoghue | Theorem::Hubner if p.residual > bound => Some(Counterexample {
                lambda: p.lambda,
                evidence: format!(
                    "{} point with eigen-residual {:.3e} > {:.3e}",
                    p.classification.verdict.as_str(),
                    p.residual,
                    bound
                ),
            }),
            Theorem::Thm3 if p.classification.verdict != Verdict::Round => {
                let (left, right) = p.classification.ratio_tail(cfg.tail_len);
                let fmt = |r: &[crate::curvature::ScaleRatio]| {
                    r.iter().map(|s| format!("{:.3e}", s.ratio)).collect::<Vec<_>>().join(", ")
                };
                Some(Counterexample {
                    lambda: p.lambda,
                    evidence: format!(
                        "non-corner point classified {} (cone width {:.3e}); left tail [{}], right tail [{}]",
                        p.classification.verdict.as_str(),
                        p.classification.normal_cone_width(),
                        fmt(&left),
                        fmt(&right)
                    ),
                })
            }
            _ => None,
        });
        TheoremReport {
            theorem,
            matrix_id: self.matrix_id.clone(),
            note: theorem.note(),
            matrix_norm: self.curve.matrix_norm,
            checked_points: checked,
            verdict: if counterexample.is_some() {
                ReportVerdict::Fail
            } else {
                ReportVerdict::Pass
            },
            counterexample,
            unresolved: self.unresolved.clone(),
        }
    }
}

/// Corners of `W(a)` must be eigenvalues.
pub fn verify_donoghue(a: &ComplexMatrix, cfg: &RunConfig) -> Result<TheoremReport> {
    Ok(analyze("matrix", a, cfg)?.report(Theorem::Donoghue, cfg))
}

/// Boundary points flagged with infinite upper curvature (corners
/// included) must be eigenvalues.
pub fn verify_hubner_upper(a: &ComplexMatrix, cfg: &RunConfig) -> Result<TheoremReport> {
    Ok(analyze("matrix", a, cfg)?.report(Theorem::Hubner, cfg))
}

/// Non-corner boundary points must be round.
pub fn verify_thm3_corollary(a: &ComplexMatrix, cfg: &RunConfig) -> Result<TheoremReport> {
    Ok(analyze("matrix", a, cfg)?.report(Theorem::Thm3, cfg))
}

/// Per-theorem tally over a suite run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SuiteSummary {
    pub matrices: usize,
    pub passed: usize,
    pub failed: usize,
    pub checked_points: usize,
    pub unresolved_points: usize,
}

impl SuiteSummary {
    pub fn add(&mut self, report: &TheoremReport) {
        self.matrices += 1;
        if report.passed() {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.checked_points += report.checked_points.len();
        self.unresolved_points += report.unresolved.len();
    }
}

/// Analyzes every matrix, in parallel when the `parallel` feature is on.
/// Output order follows the input.
pub fn analyze_all(matrices: &[GeneratedMatrix], cfg: &RunConfig) -> Vec<Result<MatrixAnalysis>> {
    #[cfg(feature = "parallel")]
    {
        use rayon::prelude::*;
        matrices.par_iter().map(|g| analyze(&g.id, &g.matrix, cfg)).collect()
    }
    #[cfg(not(feature = "parallel"))]
    {
        matrices.iter().map(|g| analyze(&g.id, &g.matrix, cfg)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn triangle() -> ComplexMatrix {
        ComplexMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)])
    }

    fn corners(r: &TheoremReport) -> Vec<Complex64> {
        r.checked_points
            .iter()
            .filter(|p| p.classification.verdict == Verdict::Corner)
            .map(|p| p.lambda)
            .collect()
    }

    #[test]
    fn triangle_corners_are_eigenvalues() {
        let r = verify_donoghue(&triangle(), &RunConfig::default()).unwrap();
        assert!(r.passed());
        let found = corners(&r);
        assert_eq!(found.len(), 3, "{found:?}");
        for z in [c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)] {
            assert!(found.iter().any(|w| (w - z).norm() < 1e-12));
        }
        assert!(r.checked_points.iter().all(|p| p.residual < 1e-14));
    }

    #[test]
    fn segment_endpoints() {
        let a = ComplexMatrix::from_diag(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let r = verify_donoghue(&a, &RunConfig::default()).unwrap();
        assert!(r.passed());
        let found = corners(&r);
        assert_eq!(found.len(), 2, "{found:?}");
    }

    #[test]
    fn disk_has_nothing_to_check() {
        let a = ComplexMatrix::jordan(2, c(0.0, 0.0));
        let cfg = RunConfig::default();
        let an = analyze("jordan", &a, &cfg).unwrap();
        let d = an.report(Theorem::Donoghue, &cfg);
        assert!(d.passed() && d.checked_points.is_empty());
        let h = an.report(Theorem::Hubner, &cfg);
        assert!(h.passed() && h.checked_points.is_empty());
        let t = an.report(Theorem::Thm3, &cfg);
        assert!(t.passed());
        assert_eq!(t.checked_points.len(), cfg.check_angles);
        assert!(an.unresolved.is_empty(), "{:?}", an.unresolved);
    }

    #[test]
    fn direct_sum_corners() {
        let cfg = RunConfig::default();
        let an = analyze("direct-sum", &corner_direct_sum(), &cfg).unwrap();
        let h = an.report(Theorem::Hubner, &cfg);
        assert!(h.passed());
        for z in [c(0.0, 0.0), c(1.0, 0.0)] {
            let p = h.checked_points.iter().find(|p| (p.lambda - z).norm() < 1e-12).unwrap();
            assert_eq!(p.classification.verdict, Verdict::Corner);
            assert!((p.classification.normal_cone_width() - std::f64::consts::FRAC_PI_2).abs() < 1e-6);
            assert!(p.residual < 1e-14);
        }
        assert!(an.report(Theorem::Thm3, &cfg).passed());
    }

    #[test]
    fn triangle_edges_are_flat() {
        let cfg = RunConfig::default();
        let an = analyze("triangle", &triangle(), &cfg).unwrap();
        let mids: Vec<&CheckedPoint> = an.points.iter().filter(|p| p.source == PointSource::EdgeMidpoint).collect();
        assert_eq!(mids.len(), 3);
        for p in mids {
            assert_eq!(p.classification.verdict, Verdict::Round);
            assert_eq!(p.classification.estimate.gamma_u_est, 0.0);
        }
        assert!(an.report(Theorem::Thm3, &cfg).passed());
    }
}
