use serde::Serialize;

use super::NormalizedBoundary;
use crate::config::RunConfig;
use crate::error::{Error, Result};

/// One dyadic scale on one side of the base point.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ScaleRatio {
    pub k: usize,
    pub scale: f64,
    pub x: f64,
    pub y: f64,
    /// `y / x^2`.
    pub ratio: f64,
    /// Inside a flat piece of the boundary: the ratio is exactly zero.
    pub flat: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct SideEstimate {
    /// Records from coarse to fine.
    pub records: Vec<ScaleRatio>,
    pub diverges: bool,
}

impl SideEstimate {
    pub fn ratios(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.ratio).collect()
    }

    pub fn tail(&self, len: usize) -> &[ScaleRatio] {
        let n = self.records.len();
        &self.records[n.saturating_sub(len)..]
    }
}

/// Lower/upper curvature estimates from the ratio `y / x^2` at dyadic
/// scales.
///
/// Divergence flags are a threshold heuristic on the finest scales (see
/// [`RunConfig::divergence_growth`] and [`RunConfig::divergence_floor`]),
/// not a proof of infinite curvature.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurvatureEstimate {
    /// Dyadic scales used, decreasing.
    pub scales: Vec<f64>,
    pub right: SideEstimate,
    pub left: SideEstimate,
    /// Smallest tail ratio over both sides.
    pub gamma_l_est: f64,
    /// Largest tail ratio over both sides.
    pub gamma_u_est: f64,
    pub gamma_l_infinite: bool,
    pub gamma_u_infinite: bool,
    /// Set when the estimate belongs to a corner, where both curvatures are
    /// infinite by convention.
    pub corner: bool,
}

impl CurvatureEstimate {
    pub fn right_ratios(&self) -> Vec<f64> {
        self.right.ratios()
    }

    pub fn left_ratios(&self) -> Vec<f64> {
        self.left.ratios()
    }

    /// `gamma_l`, with `+inf` when flagged.
    pub fn gamma_l(&self) -> f64 {
        if self.gamma_l_infinite {
            f64::INFINITY
        } else {
            self.gamma_l_est
        }
    }

    /// `gamma_u`, with `+inf` when flagged.
    pub fn gamma_u(&self) -> f64 {
        if self.gamma_u_infinite {
            f64::INFINITY
        } else {
            self.gamma_u_est
        }
    }

    /// Estimate attached to a corner: both curvatures infinite.
    pub fn corner() -> Self {
        CurvatureEstimate {
            scales: Vec::new(),
            right: SideEstimate::default(),
            left: SideEstimate::default(),
            gamma_l_est: f64::MAX,
            gamma_u_est: f64::MAX,
            gamma_l_infinite: true,
            gamma_u_infinite: true,
            corner: true,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Side {
    Right,
    Left,
}

impl Side {
    fn name(self) -> &'static str {
        match self {
            Side::Right => "right",
            Side::Left => "left",
        }
    }
}

/// Ratio tails at the dyadic scales `scale * 2^-k`, `k = 1..=num_scales`.
///
/// Scales down to `nb.finest_scale` must all be covered. Finer scales are
/// used while their heights stay above `nb.resolve_floor`, so a tightly
/// curved but smooth point is followed until its ratios level off.
pub fn curvature_estimate(nb: &NormalizedBoundary, num_scales: usize) -> Result<CurvatureEstimate> {
    curvature_estimate_with(nb, num_scales, &RunConfig::default())
}

pub fn curvature_estimate_with(
    nb: &NormalizedBoundary,
    num_scales: usize,
    cfg: &RunConfig,
) -> Result<CurvatureEstimate> {
    let scales: Vec<(usize, f64)> = (1..=num_scales)
        .map(|k| (k, nb.scale * (-(k as f64)).exp2()))
        .collect();
    let required = scales.iter().filter(|s| s.1 >= nb.finest_scale).count();
    if required < cfg.tail_len {
        return Err(Error::InsufficientResolution {
            side: "both",
            reached: scales.get(required.wrapping_sub(1)).map_or(nb.scale, |s| s.1),
            needed: nb.finest_scale,
        });
    }
    let right = side_estimate(nb, &scales, required, Side::Right, cfg)?;
    let left = side_estimate(nb, &scales, required, Side::Left, cfg)?;

    let tail: Vec<f64> = right
        .tail(cfg.tail_len)
        .iter()
        .chain(left.tail(cfg.tail_len))
        .map(|r| r.ratio)
        .collect();
    let gamma_l_est = tail.iter().copied().fold(f64::INFINITY, f64::min);
    let gamma_u_est = tail.iter().copied().fold(0.0, f64::max);
    let finest_used = right
        .records
        .len()
        .max(left.records.len())
        .min(scales.len());
    Ok(CurvatureEstimate {
        scales: scales[..finest_used].iter().map(|s| s.1).collect(),
        gamma_l_infinite: right.diverges && left.diverges,
        gamma_u_infinite: right.diverges || left.diverges,
        right,
        left,
        gamma_l_est,
        gamma_u_est,
        corner: false,
    })
}

fn side_estimate(
    nb: &NormalizedBoundary,
    scales: &[(usize, f64)],
    required: usize,
    side: Side,
    cfg: &RunConfig,
) -> Result<SideEstimate> {
    // |x| with heights, sorted by |x| ascending.
    let mut pts: Vec<(f64, f64)> = nb
        .samples
        .iter()
        .filter_map(|&(x, y)| {
            let ax = match side {
                Side::Right if x > 0.0 => x,
                Side::Left if x < 0.0 => -x,
                _ => return None,
            };
            Some((ax, y))
        })
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));

    // Convexity: a boundary point on the supporting line forces the whole
    // segment between it and the base point onto the line. Only points at
    // trusted distances count; closer in, curved pieces also drop below
    // the noise floor.
    let flat_extent = pts
        .iter()
        .filter(|p| p.1 <= nb.noise_floor && p.0 >= nb.finest_scale)
        .map(|p| p.0)
        .fold(0.0, f64::max);

    let extent = pts.last().map_or(0.0, |p| p.0).max(flat_extent);

    let mut records = Vec::new();
    for (i, &(k, s)) in scales.iter().enumerate() {
        let optional = i >= required;
        if s <= flat_extent {
            records.push(ScaleRatio {
                k,
                scale: s,
                x: s,
                y: 0.0,
                ratio: 0.0,
                flat: true,
            });
            continue;
        }
        // Smallest |x| >= s, accepted inside the dyadic cell [s, 2s).
        let idx = pts.partition_point(|p| p.0 < s);
        let found = pts.get(idx).filter(|p| p.0 < 2.0 * s);
        let Some(&(ax, y)) = found else {
            if optional && s <= extent {
                break;
            }
            continue;
        };
        let y = y.max(0.0);
        if optional && y < nb.resolve_floor.max(nb.noise_floor) {
            break;
        }
        let flat = y <= nb.noise_floor;
        records.push(ScaleRatio {
            k,
            scale: s,
            x: if side == Side::Right { ax } else { -ax },
            y: if flat { 0.0 } else { y },
            ratio: if flat { 0.0 } else { y / (ax * ax) },
            flat,
        });
    }

    // Every required scale whose cell lies inside the side's extent must be
    // covered. A side that turns away within a few scales (a narrow
    // rounded vertex) has no such cells and relies on the finer scales.
    let expected: Vec<usize> = scales[..required]
        .iter()
        .filter(|s| 2.0 * s.1 <= extent)
        .map(|s| s.0)
        .collect();
    let expected_tail = &expected[expected.len().saturating_sub(cfg.tail_len)..];
    let covered = expected_tail.iter().all(|k| records.iter().any(|r| r.k == *k));
    let deep_enough = records.last().is_some_and(|r| r.k >= scales[required - 1].0);
    if !covered || !deep_enough || records.len() < cfg.tail_len {
        let reached = records
            .iter()
            .take_while(|r| expected_tail.first().is_none_or(|k| r.k <= *k))
            .last()
            .map_or(f64::INFINITY, |r| r.scale);
        return Err(Error::InsufficientResolution {
            side: side.name(),
            reached,
            needed: scales[required - 1].1,
        });
    }

    let tail: Vec<f64> = records[records.len() - cfg.tail_len..].iter().map(|r| r.ratio).collect();
    let growing = tail
        .windows(2)
        .all(|w| w[0] > 0.0 && w[1] >= cfg.divergence_growth * w[0]);
    let diverges = growing && tail[tail.len() - 1] >= cfg.divergence_floor;
    Ok(SideEstimate { records, diverges })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn body(f: impl Fn(f64) -> f64, n: usize) -> NormalizedBoundary {
        let mut xy = vec![(0.0, 0.0)];
        for k in 0..=n {
            let x = (-(k as f64)).exp2();
            xy.push((x, f(x)));
            xy.push((-x, f(-x)));
        }
        NormalizedBoundary::from_xy(Complex64::new(0.0, 0.0), 0.0, xy, 1.0, 0.0, 0.0)
    }

    #[test]
    fn parabola_has_constant_ratio() {
        let nb = body(|x| 3.0 * x * x, 30);
        let est = curvature_estimate(&nb, 24).unwrap();
        assert!((est.gamma_l_est - 3.0).abs() < 1e-12);
        assert!((est.gamma_u_est - 3.0).abs() < 1e-12);
        assert!(!est.gamma_u_infinite);
    }

    #[test]
    fn corner_ratios_diverge_on_both_sides() {
        let nb = body(|x: f64| 0.5 * x.abs(), 30);
        let est = curvature_estimate(&nb, 24).unwrap();
        assert!(est.gamma_l_infinite && est.gamma_u_infinite);
        assert_eq!(est.gamma_l(), f64::INFINITY);
    }

    #[test]
    fn one_sided_divergence_only_flags_upper() {
        let nb = body(|x: f64| if x > 0.0 { x.powf(1.5) } else { x * x }, 30);
        let est = curvature_estimate(&nb, 24).unwrap();
        assert!(est.right.diverges && !est.left.diverges);
        assert!(est.gamma_u_infinite && !est.gamma_l_infinite);
        assert!((est.gamma_l_est - 1.0).abs() < 1e-12);
    }

    #[test]
    fn flat_side_gives_zero() {
        let nb = body(|x: f64| if x > 0.0 { 0.0 } else { x * x }, 30);
        let est = curvature_estimate(&nb, 24).unwrap();
        assert!(est.right.records.iter().all(|r| r.flat && r.ratio == 0.0));
        assert_eq!(est.gamma_l_est, 0.0);
        assert!(!est.gamma_u_infinite);
    }

    #[test]
    fn missing_fine_scales_are_reported() {
        let nb = body(|x| x * x, 10);
        match curvature_estimate(&nb, 24) {
            Err(Error::InsufficientResolution { side, reached, .. }) => {
                assert_eq!(side, "right");
                assert!((reached - (-10f64).exp2()).abs() < 1e-18);
            }
            other => panic!("expected resolution error, got {other:?}"),
        }
    }

    #[test]
    fn growth_below_floor_is_not_divergence() {
        // y = x^1.9 grows by 2^0.1 per scale: too slow and too small.
        let nb = body(|x: f64| x.abs().powf(1.9), 30);
        let est = curvature_estimate(&nb, 24).unwrap();
        assert!(!est.gamma_u_infinite);
    }
}
