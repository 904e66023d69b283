//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::f64::consts::TAU;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use numrange::curvature::{classify_point, detect_corner, epigraph_demo, Verdict};
use numrange::linalg::{spectrum, ComplexMatrix, UnitVector};
use numrange::range::{boundary_curve, rayleigh, Ellipse};
use numrange::verify::{
    analyze, analyze_all, ellipse_report, generator_suite, roots_of_unity, EllipseOutcome, MatrixAnalysis, Theorem,
};
use numrange::RunConfig;

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        ok,
        detail: detail.into(),
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn gaussian_vector(rng: &mut impl Rng, n: usize) -> UnitVector {
    loop {
        let v: Vec<Complex64> = (0..n)
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        if let Some(u) = UnitVector::normalized(v) {
            return u;
        }
    }
}

fn disk_calibration(cfg: &RunConfig) -> Outcome {
    let a = ComplexMatrix::jordan(2, c(0.0, 0.0));
    let curve = boundary_curve(&a, cfg.initial_angles, cfg.refine_tol).unwrap();
    let n = curve.len();
    let mut radial: f64 = 0.0;
    for k in 0..n {
        let p = curve.samples[k].point;
        let q = curve.samples[(k + 1) % n].point;
        radial = radial.max((p.norm() - 0.5).abs()).max((((p + q) * 0.5).norm() - 0.5).abs());
    }
    let mut worst: f64 = 0.0;
    for k in 0..8 {
        let p = classify_point(&curve, TAU * k as f64 / 8.0, cfg).unwrap();
        if p.verdict != Verdict::Round {
            return outcome(false, format!("point {k} classified {}", p.verdict.as_str()));
        }
        worst = worst
            .max((p.estimate.gamma_l_est - 1.0).abs())
            .max((p.estimate.gamma_u_est - 1.0).abs());
    }
    outcome(
        radial <= 1e-8 && worst <= 0.05,
        format!("max radial error {radial:.2e} (<= 1e-8), max |gamma - 1| {worst:.2e} (<= 0.05)"),
    )
}

fn polygon_suite(cfg: &RunConfig) -> Outcome {
    let mut notes = Vec::new();
    let mut ok = true;
    for n in 3..=6 {
        let eigs = roots_of_unity(n);
        let a = ComplexMatrix::from_diag(&eigs);
        let an = analyze(&format!("polygon-{n}"), &a, cfg).unwrap();
        let corners: Vec<_> = an
            .points
            .iter()
            .filter(|p| p.classification.verdict == Verdict::Corner)
            .collect();
        let mut width_err: f64 = 0.0;
        for &z in &eigs {
            let t = detect_corner(&an.curve, z, cfg.point_tol * an.curve.scale(), cfg.angular_tol).unwrap();
            ok &= t.is_corner;
            width_err = width_err.max((t.normal_cone_width - TAU / n as f64).abs());
        }
        let at_eigs = corners.iter().all(|p| eigs.iter().any(|z| (p.lambda - z).norm() < 1e-12));
        let report = an.report(Theorem::Donoghue, cfg);
        let max_res = report.checked_points.iter().map(|p| p.residual).fold(0.0, f64::max);
        ok &= corners.len() == n && at_eigs && width_err <= 1e-3 && report.passed() && max_res <= 1e-10;
        notes.push(format!("n={n}: {} corners, width err {width_err:.1e}, residual {max_res:.1e}", corners.len()));
    }
    outcome(ok, notes.join("; "))
}

fn epigraph(cfg: &RunConfig) -> Outcome {
    let demo = epigraph_demo(20, cfg).unwrap();
    let err = demo.max_ratio_error();
    let right = demo.estimate.right.records.len();
    let left = demo.estimate.left.records.len();
    let ok = demo.verdict == Verdict::InfiniteUpperCurvatureOnly
        && demo.estimate.gamma_u() == f64::INFINITY
        && demo.estimate.gamma_l_est < 1e-10
        && err <= 1e-10
        && right == 20
        && left == 20;
    outcome(
        ok,
        format!(
            "verdict {}, gamma_u = {}, gamma_l_est = {:.2e}, {right}+{left} scales, max ratio error {err:.1e}",
            demo.verdict.as_str(),
            demo.estimate.gamma_u(),
            demo.estimate.gamma_l_est
        ),
    )
}

fn theorem_suite(analyses: &[MatrixAnalysis], theorem: Theorem, cfg: &RunConfig) -> Outcome {
    let mut failed = Vec::new();
    let mut flagged = 0;
    let mut points = 0;
    let mut unresolved = 0;
    for an in analyses {
        let r = an.report(theorem, cfg);
        points += an.points.len();
        unresolved += r.unresolved.len();
        flagged += r.checked_points.len();
        if let Some(ce) = &r.counterexample {
            failed.push(format!("{} at {}: {}", r.matrix_id, ce.lambda, ce.evidence));
        }
    }
    let dims_ok = analyses.iter().all(|a| (2..=8).contains(&a.curve.matrix().dim()));
    let ok = failed.is_empty() && analyses.len() >= 150 && dims_ok;
    let mut detail = format!(
        "{} matrices, {points} boundary points, {flagged} checked, {unresolved} unresolved",
        analyses.len()
    );
    for f in failed.iter().take(3) {
        detail.push_str("; FAIL ");
        detail.push_str(f);
    }
    outcome(ok, detail)
}

fn ellipse_suite(cfg: &RunConfig) -> Outcome {
    let suite = generator_suite(0);
    let (mut agree, mut disagree, mut inconclusive) = (0, 0, 0);
    let mut worst: f64 = 0.0;
    let mut notes = Vec::new();
    for an in analyze_all(&suite, cfg) {
        let r = ellipse_report(&an.unwrap(), cfg).unwrap();
        agree += r.agree;
        disagree += r.disagree;
        inconclusive += r.inconclusive;
        worst = worst.max(r.worst_containment);
        for c in r.checks.iter().filter(|c| c.outcome == EllipseOutcome::Disagree) {
            notes.push(format!("{} at {}", r.matrix_id, c.lambda));
        }
    }
    let total = agree + disagree + inconclusive;
    let rate = inconclusive as f64 / total as f64;
    let ok = disagree == 0 && rate <= 0.10 && worst <= 1e-7;
    let mut detail = format!(
        "{agree} agree, {disagree} disagree, {inconclusive} inconclusive ({:.1}%), worst containment {worst:.1e}",
        100.0 * rate
    );
    if let Some(n) = notes.first() {
        detail.push_str(&format!("; first disagreement {n}"));
    }
    outcome(ok, detail)
}

fn invariants(analyses: &[MatrixAnalysis], cfg: &RunConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_rayleigh: f64 = f64::NEG_INFINITY;
    let mut worst_spectrum: f64 = f64::NEG_INFINITY;
    for an in analyses {
        let a = an.curve.matrix();
        let scale = an.curve.scale();
        for _ in 0..500 {
            let f = gaussian_vector(&mut rng, a.dim());
            let z = rayleigh(a, &f).unwrap();
            worst_rayleigh = worst_rayleigh.max(an.curve.support_excess(z) / scale);
        }
        for ev in spectrum(a).unwrap().eigenvalues {
            worst_spectrum = worst_spectrum.max(an.curve.support_excess(ev) / scale);
        }
    }

    // Affine covariance on the seed-0 corpus.
    let mut worst_affine: f64 = 0.0;
    for an in analyses.iter().filter(|a| a.matrix_id.starts_with("s0/")) {
        let a = an.curve.matrix();
        for _ in 0..20 {
            let alpha = Complex64::from_polar(rng.random_range(0.25..4.0), rng.random_range(0.0..TAU));
            let beta = c(rng.sample(StandardNormal), rng.sample(StandardNormal));
            let fresh = boundary_curve(&a.affine(alpha, beta), cfg.initial_angles, cfg.refine_tol).unwrap();
            let mapped = an.curve.transformed(alpha, beta);
            let tol = alpha.norm() * an.curve.matrix_norm + beta.norm();
            worst_affine = worst_affine.max(fresh.hausdorff_distance(&mapped) / tol);
        }
    }
    let ok = worst_rayleigh <= 1e-8 && worst_spectrum <= 1e-8 && worst_affine <= 1e-8;
    outcome(
        ok,
        format!(
            "{} matrices; relative excess: rayleigh {worst_rayleigh:.1e}, spectrum {worst_spectrum:.1e}; \
             affine hausdorff {worst_affine:.1e} (all <= 1e-8)",
            analyses.len()
        ),
    )
}

/// Andrew's monotone chain; counter-clockwise hull.
fn convex_hull(mut pts: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    pts.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: (f64, f64), a: (f64, f64), b: (f64, f64)| (a.0 - o.0) * (b.1 - o.1) - (a.1 - o.1) * (b.0 - o.0);
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &(f64, f64)>> =
            if pass == 0 { Box::new(pts.iter()) } else { Box::new(pts.iter().rev()) };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

fn polygon_area(poly: &[(f64, f64)]) -> f64 {
    let n = poly.len();
    0.5 * (0..n)
        .map(|i| {
            let (a, b) = (poly[i], poly[(i + 1) % n]);
            a.0 * b.1 - b.0 * a.1
        })
        .sum::<f64>()
        .abs()
}

fn elliptical_range(_cfg: &RunConfig) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst_outside: f64 = 0.0;
    let mut worst_fill: f64 = 1.0;
    for _ in 0..100 {
        let data = (0..4)
            .map(|_| c(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let a = ComplexMatrix::new(2, data).unwrap();
        let e = Ellipse::of_2x2(&a);
        let mut pts = Vec::with_capacity(100_000);
        for _ in 0..100_000 {
            let z = rayleigh(&a, &gaussian_vector(&mut rng, 2)).unwrap();
            let excess = (z - e.focus1).norm() + (z - e.focus2).norm() - 2.0 * e.major_semiaxis();
            worst_outside = worst_outside.max(excess);
            pts.push((z.re, z.im));
        }
        let fill = polygon_area(&convex_hull(pts)) / e.area();
        worst_fill = worst_fill.min(fill);
    }
    outcome(
        worst_outside <= 1e-9 && worst_fill >= 0.999,
        format!("max focal-sum excess {worst_outside:.1e} (<= 1e-9), min hull/ellipse area {worst_fill:.5} (>= 0.999)"),
    )
}

fn main() -> ExitCode {
    let cfg = RunConfig::default();
    let mut all_ok = true;
    let mut report = |n: usize, name: &str, limit: Option<Duration>, run: &mut dyn FnMut() -> Outcome| {
        let t = Instant::now();
        let o = run();
        let elapsed = t.elapsed();
        let in_time = limit.is_none_or(|l| elapsed <= l);
        let ok = o.ok && in_time;
        all_ok &= ok;
        let budget = limit.map_or(String::new(), |l| format!(" / {l:.0?}"));
        println!(
            "{} criterion {n} [{name}] {} ({elapsed:.2?}{budget})",
            if ok { "PASS" } else { "FAIL" },
            o.detail
        );
    };

    report(1, "disk calibration", Some(Duration::from_secs(5)), &mut || disk_calibration(&cfg));
    report(2, "polygon corners", Some(Duration::from_secs(20)), &mut || polygon_suite(&cfg));
    report(3, "epigraph example", Some(Duration::from_secs(1)), &mut || epigraph(&cfg));

    let t = Instant::now();
    let suite: Vec<_> = (0..10).flat_map(generator_suite).collect();
    let analyses: Vec<MatrixAnalysis> = analyze_all(&suite, &cfg).into_iter().map(|r| r.unwrap()).collect();
    let shared = t.elapsed();
    println!("     shared boundary analysis of {} matrices: {shared:.2?}", analyses.len());
    // The shared analysis counts against both theorem suites.
    let budget = Duration::from_secs(300).saturating_sub(shared);
    report(4, "infinite upper curvature => eigenvalue", Some(budget), &mut || {
        theorem_suite(&analyses, Theorem::Hubner, &cfg)
    });
    report(5, "non-corner points are round", Some(budget), &mut || {
        theorem_suite(&analyses, Theorem::Thm3, &cfg)
    });
    report(6, "ellipse characterization", Some(Duration::from_secs(120)), &mut || ellipse_suite(&cfg));
    report(7, "universal invariants", None, &mut || invariants(&analyses, &cfg));
    report(8, "elliptical range oracle", None, &mut || elliptical_range(&cfg));

    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
