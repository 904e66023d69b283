//! Boundary curvature: canonical position, dyadic ratio estimates, corner
//! detection and point classification.

mod classify;
mod corner;
mod epigraph;
mod estimate;
mod normalize;

pub use classify::{
    classify_at, classify_normalized, classify_point, local_points, refined_normalization, PointClassification,
    Verdict,
};
pub use corner::{detect_corner, CornerTest};
pub use epigraph::{
    epigraph_body, epigraph_demo, epigraph_height, epigraph_ratio, EpigraphDemo, EpigraphRow, MIN_EPIGRAPH_SAMPLES,
};
pub use estimate::{curvature_estimate, curvature_estimate_with, CurvatureEstimate, ScaleRatio, SideEstimate};
pub use normalize::{normalize_at, normalize_at_point, normalize_at_with, to_normalized, NormalizedBoundary};
