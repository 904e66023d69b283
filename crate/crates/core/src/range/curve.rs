use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use super::{support_function, wrap_angle, BoundarySample};
use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, ComplexMatrix};

/// Bisection depth limit for the adaptive boundary trace.
pub const MAX_DEPTH: u32 = 40;

/// Sampled boundary of `W(A)`, parametrized by outward normal angle.
///
/// Corners show up as runs of consecutive samples sharing one point, flat
/// edges as a jump between two adjacent samples.
#[derive(Debug, Clone)]
pub struct BoundaryCurve {
    pub samples: Vec<BoundarySample>,
    /// Deepest bisection level used.
    pub refinement_depth: u32,
    /// Spectral norm of the matrix.
    pub matrix_norm: f64,
    /// Angular intervals still above the gap tolerance when the depth limit
    /// was reached.
    pub unresolved: Vec<(f64, f64)>,
    matrix: ComplexMatrix,
}

/// A straight piece of the boundary between two adjacent samples.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlatEdge {
    pub start: Complex64,
    pub end: Complex64,
    /// Outward normal angle of the edge.
    pub theta: f64,
}

impl FlatEdge {
    pub fn midpoint(&self) -> Complex64 {
        (self.start + self.end) * 0.5
    }

    pub fn length(&self) -> f64 {
        (self.end - self.start).norm()
    }
}

/// Height of the outer triangle cut off by the supporting lines at two
/// adjacent samples; bounds the distance between the sampled polygon and
/// the true boundary over the interval.
pub(crate) fn interval_gap(a: &BoundarySample, b: &BoundarySample) -> f64 {
    let chord = b.point - a.point;
    let len = chord.norm();
    if len == 0.0 {
        return 0.0;
    }
    let mut span = b.theta - a.theta;
    if span <= 0.0 {
        span += TAU;
    }
    let psi = chord.arg();
    let alpha1 = signed_angle(psi - (a.theta + FRAC_PI_2)).clamp(0.0, span);
    let alpha2 = signed_angle(b.theta + FRAC_PI_2 - psi).clamp(0.0, span);
    let denom = (alpha1 + alpha2).sin();
    if alpha1 + alpha2 == 0.0 || denom <= 0.0 {
        return if alpha1 + alpha2 == 0.0 { 0.0 } else { len };
    }
    len * alpha1.sin() * alpha2.sin() / denom
}

/// Wraps into `(-pi, pi]`.
fn signed_angle(x: f64) -> f64 {
    let t = (x + PI).rem_euclid(TAU) - PI;
    if t == -PI {
        PI
    } else {
        t
    }
}

/// Traces the boundary of `W(A)` starting from `initial_angles` equally
/// spaced normals and bisecting every interval whose inner/outer gap
/// exceeds `refine_tol * ||A||`.
pub fn boundary_curve(a: &ComplexMatrix, initial_angles: usize, refine_tol: f64) -> Result<BoundaryCurve> {
    if initial_angles < 8 {
        return Err(Error::Config(format!(
            "initial_angles must be >= 8, got {initial_angles}"
        )));
    }
    let norm = spectral_norm(a)?;
    let tol = refine_tol * norm;
    let seeds: Vec<BoundarySample> = (0..initial_angles)
        .map(|k| support_function(a, TAU * k as f64 / initial_angles as f64))
        .collect::<Result<_>>()?;

    let mut tracer = Tracer {
        matrix: a,
        tol,
        samples: Vec::new(),
        unresolved: Vec::new(),
        depth: 0,
    };
    for k in 0..initial_angles {
        let lo = &seeds[k];
        tracer.samples.push(lo.clone());
        if k + 1 < initial_angles {
            tracer.refine(lo.theta, lo, seeds[k + 1].theta, &seeds[k + 1], 1)?;
        } else {
            tracer.refine(lo.theta, lo, TAU, &seeds[0], 1)?;
        }
    }
    Ok(BoundaryCurve {
        samples: tracer.samples,
        refinement_depth: tracer.depth,
        matrix_norm: norm,
        unresolved: tracer.unresolved,
        matrix: a.clone(),
    })
}

struct Tracer<'a> {
    matrix: &'a ComplexMatrix,
    tol: f64,
    samples: Vec<BoundarySample>,
    unresolved: Vec<(f64, f64)>,
    depth: u32,
}

impl Tracer<'_> {
    /// Pushes the samples strictly inside `(t0, t1)` in increasing order.
    /// `t1` may equal `2 pi` for the closing interval.
    fn refine(&mut self, t0: f64, s0: &BoundarySample, t1: f64, s1: &BoundarySample, depth: u32) -> Result<()> {
        if interval_gap(s0, s1) <= self.tol {
            return Ok(());
        }
        if depth > MAX_DEPTH {
            self.unresolved.push((t0, t1));
            return Ok(());
        }
        self.depth = self.depth.max(depth);
        let mid = 0.5 * (t0 + t1);
        let sm = support_function(self.matrix, mid)?;
        self.refine(t0, s0, mid, &sm, depth + 1)?;
        self.samples.push(sm.clone());
        self.refine(mid, &sm, t1, s1, depth + 1)
    }
}

impl BoundaryCurve {
    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Scale used for relative tolerances; never zero.
    pub fn scale(&self) -> f64 {
        if self.matrix_norm > 0.0 {
            self.matrix_norm
        } else {
            1.0
        }
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Fresh support-function evaluation at `theta`.
    pub fn sample_at(&self, theta: f64) -> Result<BoundarySample> {
        support_function(&self.matrix, theta)
    }

    /// Support function of the sampled polygon in direction `theta`.
    ///
    /// The maximizing vertex is one of the two samples whose normal angles
    /// bracket `theta`.
    pub fn polygon_support(&self, theta: f64) -> f64 {
        let n = self.samples.len();
        let theta = wrap_angle(theta);
        let dir = Complex64::from_polar(1.0, -theta);
        let idx = self.samples.partition_point(|s| s.theta <= theta);
        let hi = idx % n;
        let lo = (idx + n - 1) % n;
        let p = |k: usize| (dir * self.samples[k].point).re;
        p(lo).max(p(hi))
    }

    /// Largest boundary point modulus over the samples.
    pub fn numerical_radius(&self) -> f64 {
        self.samples.iter().map(|s| s.point.norm()).fold(0.0, f64::max)
    }

    /// Largest violation of `Re(e^{-i theta} z) <= h(theta)` over the
    /// samples; negative when `z` is strictly inside.
    pub fn support_excess(&self, z: Complex64) -> f64 {
        self.samples
            .iter()
            .map(|s| (Complex64::from_polar(1.0, -s.theta) * z).re - s.support_value)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// Adjacent samples joined by a straight piece of the boundary: the
    /// chord is at least `min_len` long and its own line supports `W(A)`
    /// within `straight_tol`.
    pub fn flat_edges(&self, min_len: f64, straight_tol: f64) -> Result<Vec<FlatEdge>> {
        let n = self.samples.len();
        let mut edges = Vec::new();
        if n < 2 {
            return Ok(edges);
        }
        for k in 0..n {
            let a = &self.samples[k];
            let b = &self.samples[(k + 1) % n];
            let chord = b.point - a.point;
            if chord.norm() <= min_len {
                continue;
            }
            let theta = wrap_angle(chord.arg() - FRAC_PI_2);
            let s = self.sample_at(theta)?;
            let dir = Complex64::from_polar(1.0, -theta);
            let excess = s.support_value - (dir * a.point).re.max((dir * b.point).re);
            if excess <= straight_tol {
                edges.push(FlatEdge {
                    start: a.point,
                    end: b.point,
                    theta,
                });
            }
        }
        Ok(edges)
    }

    /// The curve of `alpha A + beta I`, obtained by mapping every sample.
    pub fn transformed(&self, alpha: Complex64, beta: Complex64) -> BoundaryCurve {
        let rot = alpha.arg();
        let mut samples: Vec<BoundarySample> = self
            .samples
            .iter()
            .map(|s| {
                let theta = wrap_angle(s.theta + rot);
                let point = alpha * s.point + beta;
                BoundarySample {
                    theta,
                    support_value: alpha.norm() * s.support_value
                        + (Complex64::from_polar(1.0, -theta) * beta).re,
                    point,
                    witness: s.witness.clone(),
                    eigen_gap: alpha.norm() * s.eigen_gap,
                }
            })
            .collect();
        samples.sort_by(|a, b| a.theta.total_cmp(&b.theta));
        samples.dedup_by(|a, b| a.theta == b.theta);
        BoundaryCurve {
            samples,
            refinement_depth: self.refinement_depth,
            matrix_norm: alpha.norm() * self.matrix_norm + beta.norm(),
            unresolved: Vec::new(),
            matrix: self.matrix.affine(alpha, beta),
        }
    }

    /// Hausdorff distance between the two sampled polygons, computed as the
    /// largest difference of their support functions over both angle sets.
    pub fn hausdorff_distance(&self, other: &BoundaryCurve) -> f64 {
        let mut worst: f64 = 0.0;
        for s in &self.samples {
            worst = worst.max((self.polygon_support(s.theta) - other.polygon_support(s.theta)).abs());
        }
        for s in &other.samples {
            worst = worst.max((self.polygon_support(s.theta) - other.polygon_support(s.theta)).abs());
        }
        worst
    }
}

/// Membership in the closure of `W(A)`: `Re(e^{-i theta} z) <= h(theta) + tol`
/// for every sampled normal.
pub fn contains(curve: &BoundaryCurve, z: Complex64, tol: f64) -> Result<bool> {
    if curve.is_empty() {
        return Err(Error::EmptyCurve);
    }
    Ok(curve.support_excess(z) <= tol)
}
