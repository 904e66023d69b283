use num_complex::Complex64;
use serde::Serialize;

use super::{classify_normalized, CurvatureEstimate, NormalizedBoundary, Verdict};
use crate::config::RunConfig;
use crate::error::Result;

/// Fewest dyadic levels accepted by [`epigraph_body`].
pub const MIN_EPIGRAPH_SAMPLES: usize = 16;

/// The convex function `x^4` for `x <= 0`, `x^{3/2}` for `x > 0`.
pub fn epigraph_height(x: f64) -> f64 {
    if x <= 0.0 {
        x.powi(4)
    } else {
        x * x.sqrt()
    }
}

/// Exact `y / x^2` for the epigraph: `x^{-1/2}` on the right, `x^2` on the
/// left.
pub fn epigraph_ratio(x: f64) -> f64 {
    if x > 0.0 {
        1.0 / x.sqrt()
    } else {
        x * x
    }
}

/// Samples `(x, f(x))` at `x = 0` and `x = +-2^-k`, `k = 0..=n_samples`.
/// `n_samples` is raised to 16 if smaller.
pub fn epigraph_body(n_samples: usize) -> NormalizedBoundary {
    let n = n_samples.max(MIN_EPIGRAPH_SAMPLES);
    let mut xy = vec![(0.0, 0.0)];
    for k in 0..=n {
        let x = (-(k as f64)).exp2();
        xy.push((x, epigraph_height(x)));
        xy.push((-x, epigraph_height(-x)));
    }
    NormalizedBoundary::from_xy(Complex64::new(0.0, 0.0), 0.0, xy, 1.0, 0.0, 0.0)
}

/// One line of the epigraph table: estimator output next to the exact
/// ratio.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EpigraphRow {
    pub k: usize,
    pub x: f64,
    pub y: f64,
    pub ratio: f64,
    pub exact: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct EpigraphDemo {
    pub scales: usize,
    pub verdict: Verdict,
    pub estimate: CurvatureEstimate,
    /// Right side first, then left, each from coarse to fine.
    pub rows: Vec<EpigraphRow>,
}

impl EpigraphDemo {
    /// Largest `|ratio - exact|` over the table.
    pub fn max_ratio_error(&self) -> f64 {
        self.rows.iter().map(|r| (r.ratio - r.exact).abs()).fold(0.0, f64::max)
    }
}

/// Runs the estimator on [`epigraph_body`] over `scales` dyadic levels.
pub fn epigraph_demo(scales: usize, cfg: &RunConfig) -> Result<EpigraphDemo> {
    let cfg = RunConfig {
        num_scales: scales,
        ..cfg.clone()
    };
    let nb = epigraph_body(scales);
    let (verdict, _, estimate) = classify_normalized(&nb, &cfg)?;
    let rows = estimate
        .right
        .records
        .iter()
        .chain(&estimate.left.records)
        .map(|r| EpigraphRow {
            k: r.k,
            x: r.x,
            y: r.y,
            ratio: r.ratio,
            exact: epigraph_ratio(r.x),
        })
        .collect();
    Ok(EpigraphDemo {
        scales,
        verdict,
        estimate,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_values() {
        assert_eq!(epigraph_height(0.25), 0.125);
        assert_eq!(epigraph_ratio(0.25), 2.0);
        assert_eq!(epigraph_height(-0.5), 0.0625);
        assert_eq!(epigraph_ratio(-0.5), 0.25);
        assert_eq!(epigraph_height(0.0), 0.0);
    }

    #[test]
    fn body_contains_dyadic_points() {
        let nb = epigraph_body(20);
        assert_eq!(nb.samples.len(), 2 * 21 + 1);
        assert!(nb.samples.contains(&(0.25, 0.125)));
        assert!(nb.samples.contains(&(-0.5, 0.0625)));
    }

    #[test]
    fn origin_has_infinite_upper_curvature_only() {
        let cfg = RunConfig {
            num_scales: 20,
            ..Default::default()
        };
        let (verdict, width, est) = classify_normalized(&epigraph_body(20), &cfg).unwrap();
        assert_eq!(verdict, Verdict::InfiniteUpperCurvatureOnly);
        assert_eq!(width, 0.0);
        assert!(est.right.diverges && !est.left.diverges);
        assert!(est.gamma_l_est < 1e-10);
        for r in est.right.records.iter().chain(&est.left.records) {
            assert!((r.ratio - epigraph_ratio(r.x)).abs() < 1e-10 * epigraph_ratio(r.x).max(1.0));
        }
    }

    #[test]
    fn demo_table_matches_oracle() {
        let demo = epigraph_demo(20, &RunConfig::default()).unwrap();
        assert_eq!(demo.rows.len(), 40);
        assert!(demo.max_ratio_error() < 1e-10);
        assert_eq!(demo.verdict, Verdict::InfiniteUpperCurvatureOnly);
    }
}
