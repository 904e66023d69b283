use std::f64::consts::TAU;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{inner, ComplexMatrix};

/// A generated test matrix with a stable identifier.
#[derive(Debug, Clone)]
pub struct GeneratedMatrix {
    pub id: String,
    pub matrix: ComplexMatrix,
}

fn gaussian(rng: &mut impl Rng) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Complex Gaussian matrix scaled so its entries have variance `1/n`.
pub fn random_dense(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let s = (2.0 * n as f64).sqrt().recip();
    let data = (0..n * n).map(|_| gaussian(rng) * s).collect();
    ComplexMatrix::new(n, data).expect("finite entries")
}

/// Haar-ish unitary from Gram-Schmidt on a Gaussian matrix (columns).
pub fn random_unitary(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    while cols.len() < n {
        let mut v: Vec<Complex64> = (0..n).map(|_| gaussian(rng)).collect();
        for _ in 0..2 {
            for q in &cols {
                let p = inner(&v, q);
                for (x, y) in v.iter_mut().zip(q) {
                    *x -= y * p;
                }
            }
        }
        let nv = crate::linalg::norm(&v);
        if nv > 1e-8 {
            cols.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    let mut data = vec![Complex64::new(0.0, 0.0); n * n];
    for (j, col) in cols.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            data[i * n + j] = *x;
        }
    }
    ComplexMatrix::new(n, data).expect("finite entries")
}

/// `U D U*` for the given eigenvalues.
pub fn random_normal(rng: &mut impl Rng, eigenvalues: &[Complex64]) -> ComplexMatrix {
    let u = random_unitary(rng, eigenvalues.len());
    u.matmul(&ComplexMatrix::from_diag(eigenvalues)).matmul(&u.adjoint())
}

/// `(G + G*) / 2` for a Gaussian `G`, filled from the upper triangle.
pub fn random_hermitian(rng: &mut impl Rng, n: usize) -> ComplexMatrix {
    let g = random_dense(rng, n);
    let mut h = ComplexMatrix::zeros(n);
    for i in 0..n {
        h[(i, i)] = Complex64::new(g[(i, i)].re, 0.0);
        for j in i + 1..n {
            let x = (g[(i, j)] + g[(j, i)].conj()) * 0.5;
            h[(i, j)] = x;
            h[(j, i)] = x.conj();
        }
    }
    h
}

pub fn roots_of_unity(n: usize) -> Vec<Complex64> {
    (0..n).map(|k| Complex64::from_polar(1.0, TAU * k as f64 / n as f64)).collect()
}

/// `diag(0, 1)` plus a Jordan block centred at `1/2 + i` whose disk of
/// radius 1/2 touches the lines `Re z = 0` and `Re z = 1`: the hull has
/// right-angle corners at 0 and 1.
pub fn corner_direct_sum() -> ComplexMatrix {
    let seg = ComplexMatrix::from_diag(&[Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
    seg.direct_sum(&ComplexMatrix::jordan(2, Complex64::new(0.5, 1.0)))
}

/// Deterministic matrix corpus for the theorem suites.
///
/// Seed 0 keeps the polygons, Jordan blocks and the direct sum in their
/// plain form; other seeds apply a random affine map `alpha A + beta`.
pub fn generator_suite(seed: u64) -> Vec<GeneratedMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let mut push = |id: String, matrix: ComplexMatrix| {
        out.push(GeneratedMatrix {
            id: format!("s{seed}/{id}"),
            matrix,
        })
    };
    let affine = |rng: &mut ChaCha8Rng| -> (Complex64, Complex64) {
        if seed == 0 {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            let r: f64 = rng.random_range(0.5..2.0);
            let phi: f64 = rng.random_range(0.0..TAU);
            (Complex64::from_polar(r, phi), gaussian(rng) * 0.5)
        }
    };

    for n in 2..=8 {
        push(format!("dense-{n}"), random_dense(&mut rng, n));
    }
    for n in 3..=6 {
        let (alpha, beta) = affine(&mut rng);
        let d = ComplexMatrix::from_diag(&roots_of_unity(n));
        push(format!("polygon-{n}"), d.affine(alpha, beta));
    }
    for n in 2..=6 {
        let (alpha, beta) = affine(&mut rng);
        push(format!("jordan-{n}"), ComplexMatrix::jordan(n, Complex64::new(0.0, 0.0)).affine(alpha, beta));
    }
    let (alpha, beta) = affine(&mut rng);
    push("direct-sum".into(), corner_direct_sum().affine(alpha, beta));
    for _ in 0..2 {
        let n = rng.random_range(3..=6);
        push(format!("hermitian-{n}"), random_hermitian(&mut rng, n));
    }
    for (eps, tag) in [(1e-1, "1e-1"), (1e-3, "1e-3")] {
        let n = rng.random_range(3..=6);
        let eigs: Vec<Complex64> = (0..n).map(|_| gaussian(&mut rng) * 0.7).collect();
        let normal = random_normal(&mut rng, &eigs);
        let r = random_dense(&mut rng, n);
        let mut m = normal;
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += r[(i, j)] * eps;
            }
        }
        push(format!("near-normal-{tag}-{n}"), m);
    }
    out
}
