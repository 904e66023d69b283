//! General complex eigenvalues: Householder reduction to Hessenberg form
//! followed by shifted QR sweeps with Givens rotations.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, Spectrum};
use crate::error::{Error, Result};

const ITERATIONS_PER_EIGENVALUE: usize = 60;

/// Reduces `a` to upper Hessenberg form by unitary similarity.
pub fn hessenberg(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.dim();
    let mut h = a.clone();
    for k in 0..n.saturating_sub(2) {
        let x: Vec<Complex64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if alpha == 0.0 {
            continue;
        }
        let phase = if x[0].norm() == 0.0 {
            Complex64::new(1.0, 0.0)
        } else {
            x[0] / x[0].norm()
        };
        // v = x + phase * alpha * e1, reflector P = I - 2 v v* / (v* v).
        let mut v = x;
        v[0] += phase * alpha;
        let vnorm2: f64 = v.iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            continue;
        }
        // H <- P H
        for j in 0..n {
            let s: Complex64 = (k + 1..n).map(|i| v[i - k - 1].conj() * h[(i, j)]).sum();
            let f = s * (2.0 / vnorm2);
            for i in k + 1..n {
                h[(i, j)] -= v[i - k - 1] * f;
            }
        }
        // H <- H P
        for i in 0..n {
            let s: Complex64 = (k + 1..n).map(|j| h[(i, j)] * v[j - k - 1]).sum();
            let f = s * (2.0 / vnorm2);
            for j in k + 1..n {
                h[(i, j)] -= f * v[j - k - 1].conj();
            }
        }
        for i in k + 2..n {
            h[(i, k)] = Complex64::new(0.0, 0.0);
        }
    }
    h
}

/// All eigenvalues of `a` with algebraic multiplicity.
pub fn spectrum(a: &ComplexMatrix) -> Result<Spectrum> {
    let n = a.dim();
    let mut h = hessenberg(a);
    let mut eigenvalues = vec![Complex64::new(0.0, 0.0); n];
    let mut hi = n - 1;
    let mut iter = 0usize;
    let mut total = 0usize;
    let budget = ITERATIONS_PER_EIGENVALUE * n;

    loop {
        if hi == 0 {
            eigenvalues[0] = h[(0, 0)];
            break;
        }
        // Locate the start of the active unreduced block.
        let mut l = hi;
        while l > 0 {
            let sub = h[(l, l - 1)].norm();
            let diag = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let tiny = if diag == 0.0 { f64::MIN_POSITIVE } else { f64::EPSILON * diag };
            if sub <= tiny {
                h[(l, l - 1)] = Complex64::new(0.0, 0.0);
                break;
            }
            l -= 1;
        }
        if l == hi {
            eigenvalues[hi] = h[(hi, hi)];
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        total += 1;
        if total > budget {
            return Err(Error::NoConvergence { iterations: total });
        }

        let shift = if iter.is_multiple_of(11) {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + Complex64::new(h[(hi, hi - 1)].norm(), h[(hi - 1, hi - 1)].norm() * 0.5)
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };
        qr_step(&mut h, l, hi, shift);
    }
    Ok(Spectrum { eigenvalues })
}

/// Eigenvalue of the trailing 2x2 block closest to its last diagonal entry.
fn wilkinson_shift(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Complex64 {
    let half_tr = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (half_tr * half_tr - det).sqrt();
    let l1 = half_tr + disc;
    let l2 = half_tr - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

/// One explicit shifted QR step on the block `l..=hi`.
fn qr_step(h: &mut ComplexMatrix, l: usize, hi: usize, shift: Complex64) {
    for i in l..=hi {
        h[(i, i)] -= shift;
    }
    let mut rotations = Vec::with_capacity(hi - l);
    for k in l..hi {
        let x = h[(k, k)];
        let y = h[(k + 1, k)];
        let r = (x.norm_sqr() + y.norm_sqr()).sqrt();
        let (c, s) = if r == 0.0 {
            (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
        } else {
            (x / r, y / r)
        };
        // Rows k, k+1 <- [[conj c, conj s], [-s, c]] rows.
        for j in k..=hi {
            let p = h[(k, j)];
            let q = h[(k + 1, j)];
            h[(k, j)] = c.conj() * p + s.conj() * q;
            h[(k + 1, j)] = -s * p + c * q;
        }
        rotations.push((c, s));
    }
    for (offset, &(c, s)) in rotations.iter().enumerate() {
        let k = l + offset;
        let top = (k + 2).min(hi);
        for i in l..=top {
            let p = h[(i, k)];
            let q = h[(i, k + 1)];
            h[(i, k)] = p * c + q * s;
            h[(i, k + 1)] = -p * s.conj() + q * c.conj();
        }
    }
    for i in l..=hi {
        h[(i, i)] += shift;
    }
}
