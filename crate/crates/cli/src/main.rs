use std::fmt::Write as _;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use numrange::curvature::{
    classify_point, curvature_estimate_with, detect_corner, epigraph_demo, refined_normalization, PointClassification,
    ScaleRatio,
};
use numrange::document::parse_matrix;
use numrange::range::boundary_curve;
use numrange::verify::{analyze, analyze_all, ellipse_report, generator_suite, EllipseReport, SuiteSummary, Theorem};
use numrange::{Complex64, ComplexMatrix, Error, RunConfig};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_NUMERIC: u8 = 3;
/// Largest inconclusive fraction the ellipse suite tolerates.
const MAX_INCONCLUSIVE: f64 = 0.10;

#[derive(Parser)]
#[command(name = "numrange", version, about = "Numerical range boundary, curvature and spectral-inclusion checks")]
struct Cli {
    #[command(flatten)]
    config: ConfigArgs,
    #[command(subcommand)]
    command: Command,
}

/// Overrides for `RunConfig`; a `--config` file is applied first.
#[derive(Args)]
struct ConfigArgs {
    /// JSON file with RunConfig fields; missing fields keep their defaults.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, global = true)]
    refine_tol: Option<f64>,
    #[arg(long, global = true)]
    num_scales: Option<usize>,
    #[arg(long, global = true)]
    divergence_growth: Option<f64>,
    #[arg(long, global = true)]
    divergence_floor: Option<f64>,
    #[arg(long, global = true)]
    angular_tol: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Trace the boundary of W(A): theta, support, re, im.
    Boundary {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Dyadic curvature ratios at the boundary point with normal theta.
    Curvature {
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        theta: f64,
        #[arg(long)]
        scales: Option<usize>,
    },
    /// Classify boundary points as corner, infinite curvature or round.
    #[command(group = clap::ArgGroup::new("which").required(true))]
    Classify {
        #[arg(long)]
        matrix: PathBuf,
        /// Every candidate point: sample clusters, eigenvalues on the
        /// boundary, fixed normals and flat-edge midpoints.
        #[arg(long, group = "which")]
        all: bool,
        #[arg(long, group = "which", allow_hyphen_values = true)]
        theta: Option<f64>,
    },
    /// Run a theorem suite on the generated matrix corpus.
    Verify {
        #[arg(long, value_enum)]
        suite: Suite,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Leave out the timestamp so repeated runs compare byte for byte.
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Estimator table for the epigraph of x^4 (x <= 0), x^(3/2) (x > 0).
    DemoEpigraph {
        #[arg(long, default_value_t = 20)]
        scales: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Suite {
    Donoghue,
    Hubner,
    Thm3,
    Ellipse,
    All,
}

/// Failure with the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Document(_)
            | Error::Config(_)
            | Error::DimensionMismatch { .. }
            | Error::EmptyMatrix
            | Error::NonFinite { .. } => EXIT_USAGE,
            _ => EXIT_NUMERIC,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn usage(message: String) -> Failure {
    Failure {
        code: EXIT_USAGE,
        message,
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    if let Some(n) = threads_from_env() {
        // Only fails if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = run_config(&cli.config).and_then(|cfg| run(cli.command, &cfg));
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn threads_from_env() -> Option<usize> {
    let v = std::env::var("NUMRANGE_THREADS").ok()?;
    match v.trim().parse::<usize>() {
        Ok(n) if n > 0 => Some(n),
        _ => {
            eprintln!("warning: ignoring NUMRANGE_THREADS={v:?}");
            None
        }
    }
}

fn run_config(args: &ConfigArgs) -> Result<RunConfig, Failure> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            serde_json::from_slice(&text).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        None => RunConfig::default(),
    };
    if let Some(v) = args.refine_tol {
        cfg.refine_tol = v;
    }
    if let Some(v) = args.num_scales {
        cfg.num_scales = v;
    }
    if let Some(v) = args.divergence_growth {
        cfg.divergence_growth = v;
    }
    if let Some(v) = args.divergence_floor {
        cfg.divergence_floor = v;
    }
    if let Some(v) = args.angular_tol {
        cfg.angular_tol = v;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(command: Command, cfg: &RunConfig) -> Outcome {
    match command {
        Command::Boundary { matrix, format } => boundary(&read_matrix(&matrix)?, format, cfg),
        Command::Curvature { matrix, theta, scales } => {
            let mut cfg = cfg.clone();
            if let Some(s) = scales {
                cfg.num_scales = s;
                cfg.validate()?;
            }
            curvature(&read_matrix(&matrix)?, theta, &cfg)
        }
        Command::Classify { matrix, all, theta } => classify(&read_matrix(&matrix)?, all, theta, cfg),
        Command::Verify {
            suite,
            seed,
            no_timestamp,
        } => verify(
            suite,
            no_timestamp,
            &RunConfig {
                seed,
                ..cfg.clone()
            },
        ),
        Command::DemoEpigraph { scales } => {
            RunConfig {
                num_scales: scales,
                ..cfg.clone()
            }
            .validate()?;
            demo_epigraph(scales, cfg)
        }
    }
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix, Failure> {
    let bytes = std::fs::read(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    parse_matrix(&bytes).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Shortest representation that parses back to the same value.
fn num(x: f64) -> String {
    if x.is_finite() {
        serde_json::to_string(&x).expect("finite float")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn emit(text: &str) -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|_| out.flush()) {
        // A closed pipe (`| head`) is not an error.
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(Failure {
            code: EXIT_FAIL,
            message: format!("writing output: {e}"),
        }),
        _ => Ok(()),
    }
}

fn emit_json(value: &impl Serialize) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    emit(&text)
}

#[derive(Serialize)]
struct BoundaryRow {
    theta: f64,
    support: f64,
    re: f64,
    im: f64,
}

fn boundary(a: &ComplexMatrix, format: Format, cfg: &RunConfig) -> Outcome {
    let curve = boundary_curve(a, cfg.initial_angles, cfg.refine_tol)?;
    for (lo, hi) in &curve.unresolved {
        eprintln!("warning: refinement stopped at depth limit on [{lo}, {hi}]");
    }
    let rows: Vec<BoundaryRow> = curve
        .samples
        .iter()
        .map(|s| BoundaryRow {
            theta: s.theta,
            support: s.support_value,
            re: s.point.re,
            im: s.point.im,
        })
        .collect();
    match format {
        Format::Json => emit_json(&rows)?,
        Format::Csv => {
            let mut out = String::from("theta,support,re,im\n");
            for r in &rows {
                let _ = writeln!(out, "{},{},{},{}", num(r.theta), num(r.support), num(r.re), num(r.im));
            }
            emit(&out)?;
        }
    }
    Ok(0)
}

fn curvature(a: &ComplexMatrix, theta: f64, cfg: &RunConfig) -> Outcome {
    let curve = boundary_curve(a, cfg.initial_angles, cfg.refine_tol)?;
    let base = curve.sample_at(theta)?;
    let corner = detect_corner(&curve, base.point, cfg.point_tol * curve.scale(), cfg.angular_tol)?;
    let nb = refined_normalization(&curve, base.theta, base.point, cfg)?;
    let est = curvature_estimate_with(&nb, cfg.num_scales, cfg)?;

    let mut out = String::from("side,scale,x,y,ratio\n");
    for (side, records) in [("right", &est.right.records), ("left", &est.left.records)] {
        for r in records.iter() {
            let _ = writeln!(out, "{side},{},{},{},{}", num(r.scale), num(r.x), num(r.y), num(r.ratio));
        }
    }
    let mut flags = Vec::new();
    if corner.is_corner {
        flags.push("corner");
    }
    if est.gamma_l_infinite {
        flags.push("gamma_l_infinite");
    }
    if est.gamma_u_infinite {
        flags.push("gamma_u_infinite");
    }
    let _ = writeln!(out, "# gamma_l_est={}", num(est.gamma_l_est));
    let _ = writeln!(out, "# gamma_u_est={}", num(est.gamma_u_est));
    let _ = writeln!(out, "# flags={}", flags.join(","));
    emit(&out)?;
    Ok(0)
}

#[derive(Serialize)]
struct Tail {
    left: Vec<ScaleRatio>,
    right: Vec<ScaleRatio>,
}

#[derive(Serialize)]
struct ClassifiedPoint {
    theta: f64,
    point: Complex64,
    verdict: &'static str,
    normal_cone_width: f64,
    ratio_tail: Tail,
}

impl ClassifiedPoint {
    fn new(p: &PointClassification, tail_len: usize) -> Self {
        let (left, right) = p.ratio_tail(tail_len);
        ClassifiedPoint {
            theta: p.theta,
            point: p.point,
            verdict: p.verdict.as_str(),
            normal_cone_width: p.normal_cone_width(),
            ratio_tail: Tail { left, right },
        }
    }
}

fn classify(a: &ComplexMatrix, all: bool, theta: Option<f64>, cfg: &RunConfig) -> Outcome {
    let points = if all {
        let an = analyze("matrix", a, cfg)?;
        for u in &an.unresolved {
            eprintln!("warning: unresolved point {} (theta {}): {}", u.lambda, u.theta, u.reason);
        }
        an.points.iter().map(|p| ClassifiedPoint::new(&p.classification, cfg.tail_len)).collect()
    } else {
        let theta = theta.expect("clap requires --all or --theta");
        let curve = boundary_curve(a, cfg.initial_angles, cfg.refine_tol)?;
        vec![ClassifiedPoint::new(&classify_point(&curve, theta, cfg)?, cfg.tail_len)]
    };
    emit_json(&points)?;
    Ok(0)
}

#[derive(Serialize, Default)]
struct EllipseSummary {
    matrices: usize,
    agree: usize,
    disagree: usize,
    inconclusive: usize,
    inconclusive_rate: f64,
    worst_containment: f64,
    verdict: &'static str,
}

#[derive(Serialize, Default)]
struct Summary {
    #[serde(skip_serializing_if = "Option::is_none")]
    donoghue: Option<SuiteSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hubner: Option<SuiteSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    thm3: Option<SuiteSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ellipse: Option<EllipseSummary>,
}

impl Summary {
    fn slot(&mut self, t: Theorem) -> &mut SuiteSummary {
        match t {
            Theorem::Donoghue => self.donoghue.get_or_insert_with(Default::default),
            Theorem::Hubner => self.hubner.get_or_insert_with(Default::default),
            Theorem::Thm3 => self.thm3.get_or_insert_with(Default::default),
        }
    }
}

#[derive(Serialize)]
struct VerifyOutput {
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    timestamp: Option<u64>,
    verdict: &'static str,
    summary: Summary,
    reports: Vec<numrange::verify::TheoremReport>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    ellipse_reports: Vec<EllipseReport>,
}

fn verify(suite: Suite, no_timestamp: bool, cfg: &RunConfig) -> Outcome {
    let theorems: Vec<Theorem> = match suite {
        Suite::Donoghue => vec![Theorem::Donoghue],
        Suite::Hubner => vec![Theorem::Hubner],
        Suite::Thm3 => vec![Theorem::Thm3],
        Suite::Ellipse => vec![],
        Suite::All => Theorem::ALL.to_vec(),
    };
    let with_ellipse = matches!(suite, Suite::Ellipse | Suite::All);

    let matrices = generator_suite(cfg.seed);
    let mut summary = Summary::default();
    let mut reports = Vec::new();
    let mut ellipse_reports = Vec::new();
    for an in analyze_all(&matrices, cfg) {
        let an = an?;
        for &t in &theorems {
            let r = an.report(t, cfg);
            summary.slot(t).add(&r);
            reports.push(r);
        }
        if with_ellipse {
            ellipse_reports.push(ellipse_report(&an, cfg)?);
        }
    }

    let mut passed = reports.iter().all(|r| r.passed());
    if with_ellipse {
        let mut s = EllipseSummary::default();
        for r in &ellipse_reports {
            s.matrices += 1;
            s.agree += r.agree;
            s.disagree += r.disagree;
            s.inconclusive += r.inconclusive;
            s.worst_containment = s.worst_containment.max(r.worst_containment);
        }
        let total = s.agree + s.disagree + s.inconclusive;
        s.inconclusive_rate = if total == 0 { 0.0 } else { s.inconclusive as f64 / total as f64 };
        let ok = ellipse_reports.iter().all(|r| r.passed(cfg)) && s.inconclusive_rate <= MAX_INCONCLUSIVE;
        s.verdict = if ok { "pass" } else { "fail" };
        passed &= ok;
        summary.ellipse = Some(s);
    }

    let timestamp = (!no_timestamp).then(|| {
        SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0)
    });
    emit_json(&VerifyOutput {
        seed: cfg.seed,
        timestamp,
        verdict: if passed { "pass" } else { "fail" },
        summary,
        reports,
        ellipse_reports,
    })?;
    Ok(if passed { 0 } else { EXIT_FAIL })
}

fn demo_epigraph(scales: usize, cfg: &RunConfig) -> Outcome {
    let demo = epigraph_demo(scales, cfg)?;
    let mut out = String::from("k,x,y,ratio,exact\n");
    for r in &demo.rows {
        let _ = writeln!(out, "{},{},{},{},{}", r.k, num(r.x), num(r.y), num(r.ratio), num(r.exact));
    }
    let _ = writeln!(out, "# verdict={}", demo.verdict.as_str());
    let _ = writeln!(out, "# gamma_l_est={}", num(demo.estimate.gamma_l_est));
    let _ = writeln!(out, "# gamma_u_est={}", num(demo.estimate.gamma_u_est));
    let _ = writeln!(out, "# max_ratio_error={}", num(demo.max_ratio_error()));
    emit(&out)?;
    Ok(0)
}
