use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Inner product linear in the first argument: `<x, y> = sum x_i conj(y_i)`.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

pub fn norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Dense square complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    pub fn new(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::EmptyMatrix);
        }
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                got: data.len(),
            });
        }
        if let Some(k) = data.iter().position(|z| !(z.re.is_finite() && z.im.is_finite())) {
            return Err(Error::NonFinite {
                row: k / dim,
                col: k % dim,
            });
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::new(dim, data)
    }

    /// Convenience constructor from real row data.
    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        let rows: Vec<Vec<Complex64>> = rows
            .iter()
            .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim > 0, "matrix dimension must be positive");
        ComplexMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diag(&vec![ONE; dim])
    }

    pub fn from_diag(diag: &[Complex64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// `n x n` Jordan block with eigenvalue `lambda` (ones on the superdiagonal).
    pub fn jordan(dim: usize, lambda: Complex64) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = lambda;
            if i + 1 < dim {
                m[(i, i + 1)] = ONE;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.dim, "vector length must match matrix dimension");
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "matrix dimensions must agree");
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    /// `alpha * A + beta * I`.
    pub fn affine(&self, alpha: Complex64, beta: Complex64) -> Self {
        let mut out = self.clone();
        for z in out.data.iter_mut() {
            *z *= alpha;
        }
        for i in 0..self.dim {
            out[(i, i)] += beta;
        }
        out
    }

    /// `A - lambda * I`.
    pub fn shifted(&self, lambda: Complex64) -> Self {
        self.affine(ONE, -lambda)
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        let n = self.dim + other.dim;
        let mut out = Self::zeros(n);
        for i in 0..self.dim {
            for j in 0..self.dim {
                out[(i, j)] = self[(i, j)];
            }
        }
        for i in 0..other.dim {
            for j in 0..other.dim {
                out[(self.dim + i, self.dim + j)] = other[(i, j)];
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm(&self.data)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest deviation `|a_ij - conj(a_ji)|` relative to the largest entry.
    pub fn hermitian_deviation(&self) -> f64 {
        let n = self.dim;
        let scale = self.max_abs();
        if scale == 0.0 {
            return 0.0;
        }
        let mut dev: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev / scale
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// `||A* A - A A*||_F / ||A||_F^2`; zero exactly for normal matrices.
    pub fn normality_defect(&self) -> f64 {
        let fro = self.frobenius_norm();
        if fro == 0.0 {
            return 0.0;
        }
        let a = self.adjoint().matmul(self);
        let b = self.matmul(&self.adjoint());
        let diff: Vec<Complex64> = a.data.iter().zip(&b.data).map(|(x, y)| x - y).collect();
        norm(&diff) / (fro * fro)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:+.6e}{:+.6e}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// A complex vector of Euclidean norm one.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector(Vec<Complex64>);

impl UnitVector {
    pub const NORM_TOL: f64 = 1e-12;

    /// Wraps `v`, which must already have norm one within `NORM_TOL`.
    pub fn new(v: Vec<Complex64>) -> Result<Self> {
        let n = norm(&v);
        if v.is_empty() || (n - 1.0).abs() > Self::NORM_TOL {
            return Err(Error::NotUnit(n));
        }
        Ok(UnitVector(v))
    }

    /// Normalizes `v`; `None` for the zero vector or non-finite input.
    pub fn normalized(mut v: Vec<Complex64>) -> Option<Self> {
        let n = norm(&v);
        if v.is_empty() || !n.is_finite() || n == 0.0 {
            return None;
        }
        for z in v.iter_mut() {
            *z /= n;
        }
        Some(UnitVector(v))
    }

    pub fn basis(dim: usize, k: usize) -> Self {
        let mut v = vec![ZERO; dim];
        v[k] = ONE;
        UnitVector(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }
}

/// Eigenvalues with algebraic multiplicity.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    pub eigenvalues: Vec<Complex64>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    /// Distance from `z` to the nearest eigenvalue.
    pub fn distance_to(&self, z: Complex64) -> f64 {
        self.eigenvalues
            .iter()
            .map(|l| (l - z).norm())
            .fold(f64::INFINITY, f64::min)
    }

    /// Bottleneck-style multiset distance: greedy nearest matching after
    /// sorting, good enough for well-separated spectra.
    pub fn matching_distance(&self, other: &Spectrum) -> f64 {
        if self.len() != other.len() {
            return f64::INFINITY;
        }
        let mut remaining = other.eigenvalues.clone();
        let mut worst: f64 = 0.0;
        for l in &self.eigenvalues {
            let (idx, d) = remaining
                .iter()
                .enumerate()
                .map(|(i, m)| (i, (l - m).norm()))
                .fold((0, f64::INFINITY), |acc, x| if x.1 < acc.1 { x } else { acc });
            worst = worst.max(d);
            remaining.swap_remove(idx);
        }
        worst
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(ComplexMatrix::new(0, vec![]), Err(Error::EmptyMatrix));
        assert_eq!(
            ComplexMatrix::new(2, vec![ZERO; 3]),
            Err(Error::DimensionMismatch { expected: 4, got: 3 })
        );
        assert_eq!(
            ComplexMatrix::new(2, vec![ZERO, ZERO, c(f64::NAN, 0.0), ZERO]),
            Err(Error::NonFinite { row: 1, col: 0 })
        );
    }

    #[test]
    fn jordan_and_adjoint() {
        let j = ComplexMatrix::jordan(2, ZERO);
        assert_eq!(j[(0, 1)], ONE);
        assert_eq!(j.adjoint()[(1, 0)], ONE);
        assert!(j.normality_defect() > 0.1);
        assert_eq!(ComplexMatrix::identity(3).normality_defect(), 0.0);
    }

    #[test]
    fn inner_is_linear_in_first_argument() {
        let x = [c(0.0, 1.0), ONE];
        let y = [ONE, ONE];
        assert_eq!(inner(&x, &y), c(1.0, 1.0));
        assert_eq!(inner(&y, &x), c(1.0, -1.0));
    }

    #[test]
    fn unit_vector_checks_norm() {
        assert!(UnitVector::new(vec![ONE, ONE]).is_err());
        let u = UnitVector::normalized(vec![ONE, ONE]).unwrap();
        assert!((norm(u.as_slice()) - 1.0).abs() < 1e-15);
        assert!(UnitVector::normalized(vec![ZERO]).is_none());
    }

    #[test]
    fn direct_sum_places_blocks() {
        let a = ComplexMatrix::from_diag(&[ONE]);
        let b = ComplexMatrix::jordan(2, c(0.0, 1.0));
        let s = a.direct_sum(&b);
        assert_eq!(s.dim(), 3);
        assert_eq!(s[(0, 0)], ONE);
        assert_eq!(s[(1, 2)], ONE);
        assert_eq!(s[(0, 1)], ZERO);
    }
}
