//! Singular values by one-sided (Hestenes) Jacobi.
//!
//! Small singular values come out with absolute accuracy of order
//! `eps * ||A||`, without squaring the condition number as `A* A` would.

use num_complex::Complex64;

use super::matrix::{inner, norm, ComplexMatrix, UnitVector};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;

#[derive(Debug, Clone)]
pub struct SingularValues {
    /// Singular values in decreasing order.
    pub values: Vec<f64>,
    /// Right singular vectors, `right[k]` paired with `values[k]`.
    pub right: Vec<Vec<Complex64>>,
}

pub fn singular_values(a: &ComplexMatrix) -> Result<SingularValues> {
    let n = a.dim();
    // Column-major working copies.
    let mut cols: Vec<Vec<Complex64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v: Vec<Vec<Complex64>> = (0..n).map(|j| UnitVector::basis(n, j).into_inner()).collect();

    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let alpha: f64 = cols[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cols[q].iter().map(|z| z.norm_sqr()).sum();
                // gamma = c_p^H c_q
                let gamma = inner(&cols[q], &cols[p]);
                let gn = gamma.norm();
                if gn == 0.0 || gn <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let phase = gamma / gn;
                let zeta = (beta - alpha) / (2.0 * gn);
                let t = if zeta >= 0.0 {
                    1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
                } else {
                    -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                let sp = phase.conj() * s;
                let cp = phase.conj() * c;
                apply(&mut cols, p, q, c, s, sp, cp);
                apply(&mut v, p, q, c, s, sp, cp);
            }
        }
        if !rotated {
            break;
        }
        sweeps += 1;
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence { iterations: sweeps });
        }
    }

    let norms: Vec<f64> = cols.iter().map(|c| norm(c)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    Ok(SingularValues {
        values: order.iter().map(|&k| norms[k]).collect(),
        right: order.iter().map(|&k| v[k].clone()).collect(),
    })
}

fn apply(
    cols: &mut [Vec<Complex64>],
    p: usize,
    q: usize,
    c: f64,
    s: f64,
    sp: Complex64,
    cp: Complex64,
) {
    let (lo, hi) = cols.split_at_mut(q);
    let cp_col = &mut lo[p];
    let cq_col = &mut hi[0];
    for (x, y) in cp_col.iter_mut().zip(cq_col.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = a * c - b * sp;
        *y = a * s + b * cp;
    }
}

/// Spectral norm `||A||_2`.
pub fn spectral_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(singular_values(a)?.values[0])
}

/// Smallest singular value of `A - lambda I` with a unit vector `u`
/// attaining it: `||(A - lambda) u|| = sigma_min`.
pub fn min_residual_witness(a: &ComplexMatrix, lambda: Complex64) -> Result<(f64, UnitVector)> {
    let shifted = a.shifted(lambda);
    let mut sv = singular_values(&shifted)?;
    let last = sv.values.len() - 1;
    let u = UnitVector::normalized(sv.right.swap_remove(last)).expect("right singular vectors are unit");
    // Recompute the residual from u so the pair is self-consistent.
    let sigma = norm(&shifted.mul_vec(u.as_slice()));
    Ok((sigma, u))
}
