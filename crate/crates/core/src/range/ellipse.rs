use std::f64::consts::TAU;

use num_complex::Complex64;
use serde::Serialize;

use super::rayleigh;
use crate::error::Result;
use crate::linalg::{compress, inner, norm, spectral_norm, ComplexMatrix, UnitVector};

/// Relative parallelism threshold `|Af - <Af,f> f| <= tol * ||A||` for the
/// degenerate (eigenvector) branch of [`compression_ellipse`].
pub const PARALLEL_TOL: f64 = 1e-12;

/// Closed elliptical disk given by its foci and minor semiaxis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Ellipse {
    pub focus1: Complex64,
    pub focus2: Complex64,
    pub minor_semiaxis: f64,
}

impl Ellipse {
    pub fn point(z: Complex64) -> Self {
        Ellipse {
            focus1: z,
            focus2: z,
            minor_semiaxis: 0.0,
        }
    }

    /// Elliptical range of a 2x2 matrix: foci at the eigenvalues, minor
    /// semiaxis `sqrt(tr(B*B) - |l1|^2 - |l2|^2) / 2`.
    pub fn of_2x2(b: &ComplexMatrix) -> Self {
        assert_eq!(b.dim(), 2, "elliptical range needs a 2x2 matrix");
        let half_tr = b.trace() * 0.5;
        let det = b[(0, 0)] * b[(1, 1)] - b[(0, 1)] * b[(1, 0)];
        let disc = (half_tr * half_tr - det).sqrt();
        let l1 = half_tr + disc;
        let l2 = half_tr - disc;
        let fro2 = b.frobenius_norm().powi(2);
        let defect = (fro2 - l1.norm_sqr() - l2.norm_sqr()).max(0.0);
        Ellipse {
            focus1: l1,
            focus2: l2,
            minor_semiaxis: 0.5 * defect.sqrt(),
        }
    }

    pub fn center(&self) -> Complex64 {
        (self.focus1 + self.focus2) * 0.5
    }

    /// Half the focal distance.
    pub fn focal_half(&self) -> f64 {
        0.5 * (self.focus2 - self.focus1).norm()
    }

    pub fn major_semiaxis(&self) -> f64 {
        self.focal_half().hypot(self.minor_semiaxis)
    }

    pub fn is_degenerate(&self, tol: f64) -> bool {
        self.minor_semiaxis <= tol
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.major_semiaxis() * self.minor_semiaxis
    }

    fn axis(&self) -> Complex64 {
        let d = self.focus2 - self.focus1;
        if d.norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            d / d.norm()
        }
    }

    /// Boundary point at parameter `t`.
    pub fn boundary_point(&self, t: f64) -> Complex64 {
        let local = Complex64::new(self.major_semiaxis() * t.cos(), self.minor_semiaxis * t.sin());
        self.center() + self.axis() * local
    }

    pub fn boundary_points(&self, count: usize) -> Vec<Complex64> {
        (0..count)
            .map(|k| self.boundary_point(TAU * k as f64 / count as f64))
            .collect()
    }

    /// Closed-disk membership via the focal-distance sum.
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        (z - self.focus1).norm() + (z - self.focus2).norm() <= 2.0 * self.major_semiaxis() + tol
    }

    /// Radius of curvature of the boundary at parameter `t`.
    pub fn curvature_radius(&self, t: f64) -> f64 {
        let a = self.major_semiaxis();
        let b = self.minor_semiaxis;
        if a == 0.0 || b == 0.0 {
            return 0.0;
        }
        let (s, c) = t.sin_cos();
        (a * a * s * s + b * b * c * c).powf(1.5) / (a * b)
    }

    /// Parameter of the boundary point nearest to `z` and its distance.
    pub fn nearest_boundary(&self, z: Complex64) -> (f64, f64) {
        const COARSE: usize = 720;
        let dist = |t: f64| (self.boundary_point(t) - z).norm();
        let mut best_t = 0.0;
        let mut best = f64::INFINITY;
        for k in 0..COARSE {
            let t = TAU * k as f64 / COARSE as f64;
            let d = dist(t);
            if d < best {
                best = d;
                best_t = t;
            }
        }
        // Golden-section polish on the bracketing cell.
        let step = TAU / COARSE as f64;
        let (mut lo, mut hi) = (best_t - step, best_t + step);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let (mut f1, mut f2) = (dist(x1), dist(x2));
        for _ in 0..80 {
            if f1 < f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = dist(x1);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = dist(x2);
            }
        }
        let t = 0.5 * (lo + hi);
        let d = dist(t);
        if d < best {
            (t, d)
        } else {
            (best_t, best)
        }
    }
}

/// Numerical range of the compression of `A` to `span{f, Af}`.
///
/// When `Af` is parallel to `f` the span is one-dimensional and the result
/// is the point `<Af, f>`.
pub fn compression_ellipse(a: &ComplexMatrix, f: &UnitVector) -> Result<Ellipse> {
    compression_ellipse_with_norm(a, f, spectral_norm(a)?)
}

/// [`compression_ellipse`] with the spectral norm of `a` supplied.
pub fn compression_ellipse_with_norm(a: &ComplexMatrix, f: &UnitVector, scale: f64) -> Result<Ellipse> {
    let z = rayleigh(a, f)?;
    let af = a.mul_vec(f.as_slice());
    let g: Vec<Complex64> = af.iter().zip(f.as_slice()).map(|(x, y)| x - y * z).collect();
    if norm(&g) <= PARALLEL_TOL * scale {
        return Ok(Ellipse::point(z));
    }
    // One more Gram-Schmidt pass keeps the pair orthonormal to rounding.
    let mut g = g;
    let proj = inner(&g, f.as_slice());
    for (x, y) in g.iter_mut().zip(f.as_slice()) {
        *x -= y * proj;
    }
    let e2 = match UnitVector::normalized(g) {
        Some(e) => e,
        None => return Ok(Ellipse::point(z)),
    };
    let b = compress(a, &[f.clone(), e2])?;
    Ok(Ellipse::of_2x2(&b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::range::{boundary_curve, contains};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn eigenvector_gives_point_ellipse() {
        let a = ComplexMatrix::from_diag(&[c(0.0, 0.0), c(1.0, 0.0)]);
        let e = compression_ellipse(&a, &UnitVector::basis(2, 0)).unwrap();
        assert_eq!(e, Ellipse::point(c(0.0, 0.0)));
        assert!(e.is_degenerate(0.0));
    }

    #[test]
    fn nilpotent_gives_full_disk() {
        let a = ComplexMatrix::jordan(2, c(0.0, 0.0));
        let e = compression_ellipse(&a, &UnitVector::basis(2, 1)).unwrap();
        assert!(e.focus1.norm() < 1e-15 && e.focus2.norm() < 1e-15);
        assert!((e.minor_semiaxis - 0.5).abs() < 1e-15);
        assert!((e.major_semiaxis() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn triangle_compression_is_inside() {
        let a = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(0.0, 1.0), c(-1.0, 0.0)]);
        let f = UnitVector::normalized(vec![c(1.0, 0.0); 3]).unwrap();
        let e = compression_ellipse(&a, &f).unwrap();
        let curve = boundary_curve(&a, 16, 1e-8).unwrap();
        for z in e.boundary_points(64) {
            assert!(contains(&curve, z, 1e-8).unwrap(), "{z} escapes the triangle");
        }
        assert!(e.contains(rayleigh(&a, &f).unwrap(), 1e-12));
    }

    #[test]
    fn curvature_radius_of_circle() {
        let e = Ellipse {
            focus1: c(1.0, 1.0),
            focus2: c(1.0, 1.0),
            minor_semiaxis: 2.0,
        };
        assert!((e.curvature_radius(0.3) - 2.0).abs() < 1e-14);
        let (_, d) = e.nearest_boundary(c(1.0, 4.0));
        assert!((d - 1.0).abs() < 1e-12);
    }
}
