//! Command-line front end: runs one check family and writes a JSON or CSV
//! report.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 when the
//! configuration is invalid.

use std::ffi::OsString;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::base_manifold::{ChartedManifold, Matrix, BUILTIN_MANIFOLDS};
use crate::bundle_metric::{assemble_block, inverse_block, LiftVector};
use crate::connection::{
    koszul_oracle_at, lift_bracket, lift_derivative_of_pairing, nabla_bar_at, nabla_bar_lifts,
    relative_residual, BundleSite, LiftKind, KOSZUL_STEP,
};
use crate::curvature_lab::{
    constant_curvature_scan, flatness_check, vertical_system_residuals, FlatnessCondition, ScanVerdict, BASE_FLAT_TOL,
    PROFILE_TOL,
};
use crate::error::GeomError;
use crate::profile::{classify, inverse_identity_residuals, load_profile, sample_grid, Classification, MetricProfile};
use crate::sampling::{derive_seed, random_tangent_point, random_vector};

pub const SCHEMA_VERSION: u32 = 1;
pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Planes sampled per site by `curvature-scan`.
pub const SCAN_PLANES: usize = 6;

/// Key excluded when comparing reports for reproducibility.
pub const TIMESTAMP_KEY: &str = "generated_at";

#[derive(Parser, Debug, Clone)]
#[command(name = "gnatural", version, about = "Geometry checks for g-natural metrics on tangent bundles")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug, Clone, PartialEq)]
pub enum Command {
    /// Classify the profile as degenerate, pseudo-Riemannian or Riemannian.
    Classify(Options),
    /// Compare the closed-form inverse of G with the identity.
    InvertCheck(Options),
    /// Compare the closed-form connection with the Koszul oracle.
    ConnectionCheck(Options),
    /// Sample sectional curvatures and decide whether they are constant.
    CurvatureScan(Options),
    /// Check the algebraic conditions for a flat metric.
    Flatness(Options),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(clap::Args, Debug, Clone, PartialEq, Serialize)]
pub struct Options {
    /// Preset name or path to a profile document.
    #[arg(long, default_value = "sasaki")]
    pub profile: String,
    #[arg(long, default_value = "flat2")]
    pub manifold: String,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long = "t-max", default_value_t = 10.0)]
    pub t_max: f64,
    /// Report path; standard output when omitted.
    #[arg(long)]
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

impl Command {
    pub fn options(&self) -> &Options {
        match self {
            Command::Classify(o)
            | Command::InvertCheck(o)
            | Command::ConnectionCheck(o)
            | Command::CurvatureScan(o)
            | Command::Flatness(o) => o,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::InvertCheck(_) => "invert-check",
            Command::ConnectionCheck(_) => "connection-check",
            Command::CurvatureScan(_) => "curvature-scan",
            Command::Flatness(_) => "flatness",
        }
    }
}

/// A validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub command: Command,
    pub profile: MetricProfile,
    pub manifold: ChartedManifold,
}

#[derive(Debug, thiserror::Error)]
pub enum ConfigError {
    #[error("samples must be at least 1")]
    NoSamples,
    #[error("t-max must be positive and finite, got {0}")]
    BadTMax(f64),
    #[error("unknown manifold `{0}` (known: {known})", known = BUILTIN_MANIFOLDS.join(", "))]
    Manifold(String),
    #[error("profile: {0}")]
    Profile(GeomError),
}

impl RunConfig {
    pub fn new(command: Command) -> Result<Self, ConfigError> {
        let o = command.options();
        if o.samples == 0 {
            return Err(ConfigError::NoSamples);
        }
        if !(o.t_max > 0.0 && o.t_max.is_finite()) {
            return Err(ConfigError::BadTMax(o.t_max));
        }
        let manifold = ChartedManifold::builtin(&o.manifold).map_err(|_| ConfigError::Manifold(o.manifold.clone()))?;
        let profile = load_profile(&o.profile).map_err(ConfigError::Profile)?;
        Ok(RunConfig { command, profile, manifold })
    }

    pub fn options(&self) -> &Options {
        self.command.options()
    }
}

/// One pass/fail line of a report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    /// Passes when `value <= tolerance`; NaN fails.
    pub fn at_most(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            passed: value <= tolerance,
        }
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Self {
        Check {
            name: name.into(),
            value: if ok { 0.0 } else { 1.0 },
            tolerance: 0.0,
            passed: ok,
        }
    }
}

/// Outcome of a run before serialisation.
#[derive(Clone, Debug)]
pub struct Report {
    pub command: &'static str,
    pub config: Value,
    pub checks: Vec<Check>,
    pub verdict: String,
    pub details: Value,
    pub warnings: Vec<String>,
    /// Rows for CSV output, header first.
    pub rows: Vec<Vec<String>>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            EXIT_PASS
        } else {
            EXIT_FAIL
        }
    }

    /// JSON document with sorted keys.
    pub fn to_json(&self, generated_at: u64) -> Value {
        json!({
            "schema": SCHEMA_VERSION,
            "tool": "gnatural",
            "version": env!("CARGO_PKG_VERSION"),
            "command": self.command,
            "config": self.config,
            "passed": self.passed(),
            "verdict": self.verdict,
            "checks": self.checks,
            "details": self.details,
            "warnings": self.warnings,
            TIMESTAMP_KEY: generated_at,
        })
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Json => {
                let now = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
                let mut s = serde_json::to_string_pretty(&self.to_json(now)).expect("report values serialise");
                s.push('\n');
                s
            }
            Format::Csv => self.to_csv(),
        }
    }
}

fn check_rows(checks: &[Check]) -> Vec<Vec<String>> {
    let mut rows = vec![vec!["check".into(), "value".into(), "tolerance".into(), "passed".into()]];
    rows.extend(checks.iter().map(|c| {
        vec![c.name.clone(), format!("{:e}", c.value), format!("{:e}", c.tolerance), c.passed.to_string()]
    }));
    rows
}

fn site_rng(seed: u64, k: usize) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, k as u64))
}

fn max_norm(o: &Options) -> f64 {
    o.t_max.sqrt()
}

/// Runs a validated configuration.
pub fn run(cfg: &RunConfig) -> Report {
    let o = cfg.options();
    let config = json!({
        "command": cfg.command.name(),
        "profile": o.profile,
        "manifold": o.manifold,
        "seed": o.seed,
        "samples": o.samples,
        "t_max": o.t_max,
        "format": o.format,
    });
    let (checks, verdict, details, rows) = match &cfg.command {
        Command::Classify(_) => run_classify(cfg),
        Command::InvertCheck(_) => run_invert(cfg),
        Command::ConnectionCheck(_) => run_connection(cfg),
        Command::CurvatureScan(_) => run_scan(cfg),
        Command::Flatness(_) => run_flatness(cfg),
    };
    let warnings = details
        .get("warnings")
        .and_then(Value::as_array)
        .map(|ws| ws.iter().filter_map(|w| w.as_str().map(str::to_string)).collect())
        .unwrap_or_default();
    Report {
        command: cfg.command.name(),
        config,
        checks,
        verdict,
        details,
        warnings,
        rows,
    }
}

type Outcome = (Vec<Check>, String, Value, Vec<Vec<String>>);

fn run_classify(cfg: &RunConfig) -> Outcome {
    let o = cfg.options();
    let grid = sample_grid(o.t_max, o.samples.max(2));
    let class = classify(&cfg.profile, &grid);
    let mut checks = vec![Check::flag("nondegenerate", class != Classification::Degenerate)];
    let identity_max = grid
        .iter()
        .map(|&t| match inverse_identity_residuals(&cfg.profile, t) {
            Ok(r) => r.iter().fold(0.0_f64, |a, v| a.max(v.abs())),
            Err(_) => f64::NAN,
        })
        .fold(0.0_f64, |a, v| if v.is_nan() || a.is_nan() { f64::NAN } else { a.max(v) });
    if class != Classification::Degenerate {
        checks.push(Check::at_most("inverse_identities", identity_max, 1e-10));
    }
    let inconsistent: Vec<Value> = cfg
        .profile
        .derivative_consistency(&grid)
        .into_iter()
        .map(|(c, t, rel)| json!({"component": c.name(), "t": t, "relative_error": rel}))
        .collect();
    checks.push(Check::flag("derivatives_consistent", inconsistent.is_empty()));
    let verdict = serde_json::to_value(class).expect("enum serialises").as_str().unwrap_or_default().to_string();
    let details = json!({ "classification": class, "grid_points": grid.len(), "derivative_mismatches": inconsistent });
    let rows = check_rows(&checks);
    (checks, verdict, details, rows)
}

fn run_invert(cfg: &RunConfig) -> Outcome {
    let o = cfg.options();
    let m = cfg.manifold.dim();
    let mut worst = 0.0_f64;
    let mut errors = Vec::new();
    for k in 0..o.samples {
        let mut rng = site_rng(o.seed, k);
        let at = random_tangent_point(&cfg.manifold, &mut rng, max_norm(o));
        match inverse_block(&cfg.profile, &at) {
            Ok(inv) => {
                let prod: Matrix = assemble_block(&cfg.profile, &at).full() * inv.full();
                worst = worst.max((prod - Matrix::identity(2 * m, 2 * m)).amax());
            }
            Err(e) => errors.push(format!("sample {k}: {e}")),
        }
    }
    let checks = vec![
        Check::at_most("inverse_residual", worst, 1e-9),
        Check::flag("all_samples_evaluated", errors.is_empty()),
    ];
    let verdict = if checks.iter().all(|c| c.passed) { "pass" } else { "fail" }.to_string();
    let details = json!({ "max_residual": worst, "errors": errors });
    let rows = check_rows(&checks);
    (checks, verdict, details, rows)
}

fn run_connection(cfg: &RunConfig) -> Outcome {
    let o = cfg.options();
    let m = cfg.manifold.dim();
    let (mut oracle, mut torsion, mut compat) = (0.0_f64, 0.0_f64, 0.0_f64);
    let mut errors = Vec::new();
    for k in 0..o.samples {
        let mut rng = site_rng(o.seed, k);
        let at = random_tangent_point(&cfg.manifold, &mut rng, max_norm(o));
        let kind = LiftKind::ALL[rng.random_range(0..4)];
        let (x, y) = (random_vector(&mut rng, m), random_vector(&mut rng, m));
        let lift = |rng: &mut ChaCha8Rng| LiftVector::new(random_vector(rng, m), random_vector(rng, m));
        let (a, b, c) = (lift(&mut rng), lift(&mut rng), lift(&mut rng));
        let result = (|| -> crate::error::Result<(f64, f64, f64)> {
            let site = BundleSite::new(&cfg.profile, &cfg.manifold, &at)?;
            let closed = nabla_bar_at(&site, kind, &x, &y);
            let numeric = koszul_oracle_at(&cfg.profile, &cfg.manifold, &site, kind, &x, &y, KOSZUL_STEP)?;
            let t = nabla_bar_lifts(&site, &a, &b) - nabla_bar_lifts(&site, &b, &a) - lift_bracket(&site.geom, &at.u, &a, &b);
            let lhs = lift_derivative_of_pairing(&cfg.profile, &cfg.manifold, &site, &a, &b, &c, KOSZUL_STEP)?;
            let rhs = site.pair(&nabla_bar_lifts(&site, &a, &b), &c) + site.pair(&b, &nabla_bar_lifts(&site, &a, &c));
            Ok((relative_residual(&closed, &numeric), t.amax(), (lhs - rhs).abs() / rhs.abs().max(1.0)))
        })();
        match result {
            Ok((r1, r2, r3)) => {
                oracle = oracle.max(r1);
                torsion = torsion.max(r2);
                compat = compat.max(r3);
            }
            Err(e) => errors.push(format!("sample {k}: {e}")),
        }
    }
    let checks = vec![
        Check::at_most("koszul_residual", oracle, 1e-5),
        Check::at_most("torsion_residual", torsion, 1e-5),
        Check::at_most("metric_compatibility_residual", compat, 1e-5),
        Check::flag("all_samples_evaluated", errors.is_empty()),
    ];
    let verdict = if checks.iter().all(|c| c.passed) { "pass" } else { "fail" }.to_string();
    let details = json!({ "errors": errors });
    let rows = check_rows(&checks);
    (checks, verdict, details, rows)
}

fn run_scan(cfg: &RunConfig) -> Outcome {
    let o = cfg.options();
    let report = constant_curvature_scan(&cfg.profile, &cfg.manifold, o.samples, SCAN_PLANES, o.seed);
    let mut checks = vec![
        Check::flag("all_sites_evaluated", report.errors.is_empty()),
        Check::flag("verdict_decided", report.verdict != ScanVerdict::Inconclusive),
    ];
    if let Some(r) = report.constant_curvature_residuals {
        checks.push(Check::at_most("constant_curvature_system", r.max_abs(), 1e-6));
    }
    if let Some(r) = report.zero_section_residual {
        checks.push(Check::at_most("zero_section", r, 1e-8));
    }
    let verdict = serde_json::to_value(report.verdict).expect("enum serialises").as_str().unwrap_or_default().to_string();
    let mut rows = vec![vec!["site".to_string(), "plane".to_string(), "k".to_string()]];
    rows.extend(report.samples.iter().map(|s| vec![s.site.to_string(), s.plane.to_string(), format!("{:e}", s.k)]));
    let details = serde_json::to_value(&report).expect("scan report serialises");
    (checks, verdict, details, rows)
}

fn run_flatness(cfg: &RunConfig) -> Outcome {
    let o = cfg.options();
    let grid = sample_grid(o.t_max, o.samples.max(2));
    let report = flatness_check(&cfg.profile, &cfg.manifold, &grid);
    let checks: Vec<Check> = report
        .residuals
        .iter()
        .map(|(cond, r)| {
            let name = serde_json::to_value(cond).expect("enum serialises");
            let tolerance = match cond {
                FlatnessCondition::FlatBase => BASE_FLAT_TOL,
                FlatnessCondition::Riemannian => 0.0,
                _ => PROFILE_TOL,
            };
            Check {
                name: name.as_str().unwrap_or_default().to_string(),
                value: *r,
                tolerance,
                passed: !report.violations.iter().any(|v| v.condition == *cond),
            }
        })
        .collect();
    let system = vertical_system_residuals(&cfg.profile, &grid)
        .map(|rs| rs.iter().fold(0.0_f64, |a, r| a.max(r.max_abs())))
        .ok();
    let details = json!({ "flatness": report, "vertical_system_max": system });
    let rows = check_rows(&checks);
    (checks, report.verdict.to_string(), details, rows)
}

/// Parses arguments, runs, writes the report and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_CONFIG } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let cfg = match RunConfig::new(cli.command) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_CONFIG;
        }
    };
    let report = run(&cfg);
    let text = report.render(cfg.options().format);
    match &cfg.options().out {
        Some(path) => {
            if let Err(e) = std::fs::write(path, text) {
                eprintln!("error: cannot write {}: {e}", path.display());
                return EXIT_CONFIG;
            }
        }
        None => print!("{text}"),
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    for c in report.checks.iter().filter(|c| !c.passed) {
        eprintln!("check failed: {} = {:e} (tolerance {:e})", c.name, c.value, c.tolerance);
    }
    report.exit_code()
}
