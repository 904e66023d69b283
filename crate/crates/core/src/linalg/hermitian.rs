//! Hermitian eigenproblems by cyclic complex Jacobi rotations.
//!
//! Jacobi is slow for large matrices but delivers eigenvectors accurate to
//! a few ulps relative to the matrix norm, which is what the support
//! function and everything downstream of it depends on.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, UnitVector};
use crate::error::{Error, Result};

/// Inputs whose relative Hermitian deviation exceeds this are rejected.
pub const HERMITIAN_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 64;

/// `(e^{-i theta} A + e^{i theta} A*) / 2`, exactly Hermitian.
pub fn hermitian_part(a: &ComplexMatrix, theta: f64) -> ComplexMatrix {
    let n = a.dim();
    let w = Complex64::from_polar(1.0, -theta);
    let mut h = ComplexMatrix::zeros(n);
    for i in 0..n {
        h[(i, i)] = Complex64::new((w * a[(i, i)]).re, 0.0);
        for j in i + 1..n {
            let v = (w * a[(i, j)] + (w * a[(j, i)]).conj()) * 0.5;
            h[(i, j)] = v;
            h[(j, i)] = v.conj();
        }
    }
    h
}

/// Full eigendecomposition of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Eigenvalues in decreasing order.
    pub values: Vec<f64>,
    /// `vectors[k]` is the unit eigenvector for `values[k]`.
    pub vectors: Vec<Vec<Complex64>>,
}

pub fn hermitian_eigen(h: &ComplexMatrix) -> Result<HermitianEigen> {
    let dev = h.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let n = h.dim();
    let mut a = h.clone();
    for i in 0..n {
        a[(i, i)] = Complex64::new(a[(i, i)].re, 0.0);
    }
    // Columns of v are the eigenvectors, stored row-major in a matrix.
    let mut v = ComplexMatrix::identity(n);
    let fro = a.frobenius_norm();
    let threshold = f64::EPSILON * fro;

    let mut converged = n == 1 || fro == 0.0;
    let mut sweeps = 0;
    while !converged {
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                iterations: sweeps,
            });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n - 1 {
            for q in p + 1..n {
                let b = a[(p, q)];
                let bn = b.norm();
                if bn <= threshold {
                    continue;
                }
                rotated = true;
                rotate(&mut a, &mut v, p, q, b, bn);
            }
        }
        converged = !rotated;
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values = order.iter().map(|&k| a[(k, k)].re).collect();
    let vectors = order.iter().map(|&k| v.column(k)).collect();
    Ok(HermitianEigen { values, vectors })
}

/// Annihilates `a[(p, q)] = b` with `G = diag(1, e^{-i phi}) R(t)`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize, b: Complex64, bn: f64) {
    let n = a.dim();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase = b / bn; // e^{i phi}
    let zeta = (aqq - app) / (2.0 * bn);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let sp = phase.conj() * s; // s e^{-i phi}
    let cp = phase.conj() * c; // c e^{-i phi}

    // Columns: A <- A G.
    for k in 0..n {
        let x = a[(k, p)];
        let y = a[(k, q)];
        a[(k, p)] = x * c - y * sp;
        a[(k, q)] = x * s + y * cp;
    }
    // Rows: A <- G* A.
    for k in 0..n {
        let x = a[(p, k)];
        let y = a[(q, k)];
        a[(p, k)] = x * c - y * sp.conj();
        a[(q, k)] = x * s + y * cp.conj();
    }
    a[(p, q)] = Complex64::new(0.0, 0.0);
    a[(q, p)] = Complex64::new(0.0, 0.0);
    a[(p, p)] = Complex64::new(app - t * bn, 0.0);
    a[(q, q)] = Complex64::new(aqq + t * bn, 0.0);

    for k in 0..n {
        let x = v[(k, p)];
        let y = v[(k, q)];
        v[(k, p)] = x * c - y * sp;
        v[(k, q)] = x * s + y * cp;
    }
}

/// Largest eigenvalue of a Hermitian matrix with a unit eigenvector.
///
/// For a repeated top eigenvalue any unit vector of the eigenspace may be
/// returned.
pub fn hermitian_extremal_eig(h: &ComplexMatrix) -> Result<(f64, UnitVector)> {
    let (lambda, v, _) = hermitian_top_with_gap(h)?;
    Ok((lambda, v))
}

/// Like [`hermitian_extremal_eig`] but also returns the gap to the second
/// eigenvalue (`+inf` for 1x1 input).
pub fn hermitian_top_with_gap(h: &ComplexMatrix) -> Result<(f64, UnitVector, f64)> {
    let mut eig = hermitian_eigen(h)?;
    let gap = if eig.values.len() > 1 {
        eig.values[0] - eig.values[1]
    } else {
        f64::INFINITY
    };
    let v = eig.vectors.swap_remove(0);
    let v = UnitVector::normalized(v).expect("Jacobi eigenvectors are nonzero");
    Ok((eig.values[0], v, gap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::matrix::norm;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn residual(h: &ComplexMatrix, lambda: f64, v: &[Complex64]) -> f64 {
        let hv = h.mul_vec(v);
        let r: Vec<Complex64> = hv.iter().zip(v).map(|(a, b)| a - b * lambda).collect();
        norm(&r)
    }

    #[test]
    fn hermitian_part_identity() {
        let h = hermitian_part(&ComplexMatrix::identity(2), 0.0);
        assert_eq!(h, ComplexMatrix::identity(2));
    }

    #[test]
    fn hermitian_part_of_nilpotent() {
        let h = hermitian_part(&ComplexMatrix::jordan(2, c(0.0, 0.0)), 0.0);
        let expected = ComplexMatrix::from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]).unwrap();
        assert_eq!(h, expected);
    }

    #[test]
    fn hermitian_part_rotates() {
        let a = ComplexMatrix::from_diag(&[c(0.0, 1.0), c(0.0, -1.0)]);
        let h = hermitian_part(&a, FRAC_PI_2);
        assert!((h[(0, 0)] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((h[(1, 1)] - c(-1.0, 0.0)).norm() < 1e-15);
        assert!(h.is_hermitian(0.0));
    }

    #[test]
    fn extremal_of_diagonal() {
        let h = ComplexMatrix::from_real_rows(&[&[0.0, 0.0], &[0.0, 1.0]]).unwrap();
        let (l, v) = hermitian_extremal_eig(&h).unwrap();
        assert_eq!(l, 1.0);
        assert!((v.as_slice()[1].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn extremal_of_offdiagonal_half() {
        // Closed form: eigenvalues +-1/2 with eigenvectors (1, +-1)/sqrt 2.
        let h = ComplexMatrix::from_real_rows(&[&[0.0, 0.5], &[0.5, 0.0]]).unwrap();
        let (l, v) = hermitian_extremal_eig(&h).unwrap();
        assert!((l - 0.5).abs() < 1e-15);
        let phase = v.as_slice()[0] / v.as_slice()[0].norm();
        assert!((v.as_slice()[0] * phase.conj() - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-14);
        assert!((v.as_slice()[1] * phase.conj() - c(FRAC_1_SQRT_2, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn extremal_of_degenerate() {
        let h = ComplexMatrix::from_real_rows(&[&[3.0, 0.0], &[0.0, 3.0]]).unwrap();
        let (l, v) = hermitian_extremal_eig(&h).unwrap();
        assert_eq!(l, 3.0);
        assert!(residual(&h, l, v.as_slice()) < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = ComplexMatrix::jordan(2, c(0.0, 0.0));
        assert!(matches!(hermitian_extremal_eig(&a), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn complex_hermitian_residuals() {
        let h = ComplexMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5)],
            vec![c(1.0, 1.0), c(-1.0, 0.0), c(0.25, 0.0)],
            vec![c(0.0, -0.5), c(0.25, 0.0), c(0.5, 0.0)],
        ])
        .unwrap();
        let eig = hermitian_eigen(&h).unwrap();
        let trace: f64 = eig.values.iter().sum();
        assert!((trace - 1.5).abs() < 1e-14);
        for (l, v) in eig.values.iter().zip(&eig.vectors) {
            assert!(residual(&h, *l, v) < 1e-14 * h.frobenius_norm());
        }
        assert!(eig.values.windows(2).all(|w| w[0] >= w[1]));
    }
}
