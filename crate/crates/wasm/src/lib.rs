//! Browser bindings. Every export takes and returns JSON strings; the
//! `*_json` functions hold the logic and also run natively.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use numrange::curvature::{classify_point, epigraph_demo, EpigraphRow};
use numrange::document::parse_matrix;
use numrange::linalg::spectrum;
use numrange::range::boundary_curve;
use numrange::verify::{ellipse_check_at, EllipseOutcome};
use numrange::{Complex64, ComplexMatrix, RunConfig};

/// Largest number of boundary points handed to the page.
const MAX_DRAW_POINTS: usize = 2048;
const ELLIPSE_POINTS: usize = 128;

#[derive(Serialize)]
struct BoundaryView {
    scale: f64,
    points: Vec<Complex64>,
    eigenvalues: Vec<Complex64>,
}

#[derive(Serialize)]
struct ClassifyView {
    theta: f64,
    point: Complex64,
    verdict: &'static str,
    normal_cone_width: f64,
    gamma_l_est: Option<f64>,
    gamma_u_est: Option<f64>,
    /// Boundary of the witness compression ellipse, when one was found.
    ellipse: Vec<Complex64>,
    ellipse_outcome: EllipseOutcome,
}

#[derive(Serialize)]
struct EpigraphView {
    verdict: &'static str,
    gamma_l_est: f64,
    gamma_u_est: f64,
    max_ratio_error: f64,
    rows: Vec<EpigraphRow>,
}

fn matrix(doc: &str) -> Result<ComplexMatrix, String> {
    parse_matrix(doc.as_bytes()).map_err(|e| e.to_string())
}

fn to_json(v: &impl Serialize) -> String {
    serde_json::to_string(v).expect("view serializes")
}

/// Infinite estimates become `null`.
fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

pub fn boundary_json(doc: &str) -> Result<String, String> {
    let a = matrix(doc)?;
    let cfg = RunConfig::default();
    let curve = boundary_curve(&a, cfg.initial_angles, cfg.refine_tol).map_err(|e| e.to_string())?;
    let step = curve.samples.len().div_ceil(MAX_DRAW_POINTS).max(1);
    let points = curve.samples.iter().step_by(step).map(|s| s.point).collect();
    let eigenvalues = spectrum(&a).map_err(|e| e.to_string())?.eigenvalues;
    Ok(to_json(&BoundaryView {
        scale: curve.scale(),
        points,
        eigenvalues,
    }))
}

pub fn classify_json(doc: &str, theta: f64) -> Result<String, String> {
    let a = matrix(doc)?;
    let cfg = RunConfig::default();
    let curve = boundary_curve(&a, cfg.initial_angles, cfg.refine_tol).map_err(|e| e.to_string())?;
    let p = classify_point(&curve, theta, &cfg).map_err(|e| e.to_string())?;
    let check = ellipse_check_at(&curve, &p, &cfg).map_err(|e| e.to_string())?;
    Ok(to_json(&ClassifyView {
        theta: p.theta,
        point: p.point,
        verdict: p.verdict.as_str(),
        normal_cone_width: p.normal_cone_width(),
        gamma_l_est: finite(p.estimate.gamma_l()),
        gamma_u_est: finite(p.estimate.gamma_u()),
        ellipse: check.ellipse.map(|e| e.boundary_points(ELLIPSE_POINTS)).unwrap_or_default(),
        ellipse_outcome: check.outcome,
    }))
}

pub fn epigraph_json(scales: usize) -> Result<String, String> {
    let cfg = RunConfig {
        num_scales: scales,
        ..RunConfig::default()
    };
    cfg.validate().map_err(|e| e.to_string())?;
    let demo = epigraph_demo(scales, &cfg).map_err(|e| e.to_string())?;
    Ok(to_json(&EpigraphView {
        verdict: demo.verdict.as_str(),
        gamma_l_est: demo.estimate.gamma_l_est,
        gamma_u_est: demo.estimate.gamma_u_est,
        max_ratio_error: demo.max_ratio_error(),
        rows: demo.rows,
    }))
}

/// `{scale, points, eigenvalues}` for a matrix document.
#[wasm_bindgen]
pub fn boundary(doc: &str) -> Result<String, JsError> {
    boundary_json(doc).map_err(|e| JsError::new(&e))
}

/// Verdict, curvature estimates and witness ellipse at normal `theta`.
#[wasm_bindgen]
pub fn classify(doc: &str, theta: f64) -> Result<String, JsError> {
    classify_json(doc, theta).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn epigraph(scales: usize) -> Result<String, JsError> {
    epigraph_json(scales).map_err(|e| JsError::new(&e))
}
