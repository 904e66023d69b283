//! Dense complex linear algebra used by every other module.

mod hermitian;
mod matrix;
mod schur;
mod svd;

use num_complex::Complex64;

pub use hermitian::{
    hermitian_eigen, hermitian_extremal_eig, hermitian_part, hermitian_top_with_gap,
    HermitianEigen, HERMITIAN_TOL,
};
pub use matrix::{inner, norm, ComplexMatrix, Spectrum, UnitVector};
pub use schur::{hessenberg, spectrum};
pub use svd::{min_residual_witness, singular_values, spectral_norm, SingularValues};

use crate::error::{Error, Result};

/// Orthonormality tolerance for compression bases.
pub const ORTHONORMAL_TOL: f64 = 1e-10;

/// Compression of `a` to the span of an orthonormal basis:
/// `B[j][k] = <A b_k, b_j>`.
pub fn compress(a: &ComplexMatrix, basis: &[UnitVector]) -> Result<ComplexMatrix> {
    let n = a.dim();
    if basis.is_empty() {
        return Err(Error::EmptyMatrix);
    }
    for b in basis {
        if b.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: b.dim(),
            });
        }
    }
    let mut dev: f64 = 0.0;
    for (j, bj) in basis.iter().enumerate() {
        for bk in &basis[j..] {
            let g = inner(bk.as_slice(), bj.as_slice());
            let target = if std::ptr::eq(bj, bk) { 1.0 } else { 0.0 };
            dev = dev.max((g - target).norm());
        }
    }
    if dev > ORTHONORMAL_TOL {
        return Err(Error::NotOrthonormal(dev));
    }
    let images: Vec<Vec<Complex64>> = basis.iter().map(|b| a.mul_vec(b.as_slice())).collect();
    let m = basis.len();
    let mut data = Vec::with_capacity(m * m);
    for bj in basis {
        for ak in &images {
            data.push(inner(ak, bj.as_slice()));
        }
    }
    ComplexMatrix::new(m, data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn compress_full_basis_is_identity_map() {
        let a = ComplexMatrix::jordan(3, c(0.5, -1.0));
        let basis: Vec<UnitVector> = (0..3).map(|k| UnitVector::basis(3, k)).collect();
        assert_eq!(compress(&a, &basis).unwrap(), a);
    }

    #[test]
    fn compress_to_coordinate_plane() {
        let a = ComplexMatrix::from_diag(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]);
        let basis = [UnitVector::basis(3, 0), UnitVector::basis(3, 1)];
        let b = compress(&a, &basis).unwrap();
        assert_eq!(b, ComplexMatrix::from_diag(&[c(1.0, 0.0), c(2.0, 0.0)]));
    }

    #[test]
    fn compress_to_line_is_rayleigh_quotient() {
        let a = ComplexMatrix::jordan(2, c(0.0, 0.0));
        let f = UnitVector::new(vec![c(FRAC_1_SQRT_2, 0.0), c(FRAC_1_SQRT_2, 0.0)]).unwrap();
        let b = compress(&a, &[f]).unwrap();
        assert!((b[(0, 0)] - c(0.5, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn compress_rejects_non_orthonormal() {
        let a = ComplexMatrix::identity(2);
        let f = UnitVector::basis(2, 0);
        let g = UnitVector::normalized(vec![c(1.0, 0.0), c(1.0, 0.0)]).unwrap();
        assert!(matches!(compress(&a, &[f, g]), Err(Error::NotOrthonormal(_))));
    }
}
