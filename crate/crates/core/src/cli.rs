//! Command-line front end: configuration merging (flags over file over
//! defaults), validation, and deterministic CSV/JSON artifact emission for
//! every computation in the library.
//!
//! Exit codes: 0 success, 2 invariant violation (tail mass, residual over
//! tolerance, non-finite values), 3 usage error. Every artifact starts with
//! a comment line (CSV) or field (JSON) carrying a hash of the effective
//! configuration, and the effective configuration itself is echoed to a
//! `<out>.config.json` sidecar.

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::eigenbasis::{self, LadderDirection};
use crate::error::Error;
use crate::fockspace::{algebra_residual, AlgebraIdentity, TruncatedBasis};
use crate::quasiprob::{self, GridKind};
use crate::states::{canonical_build, dual_series_diagnose, nlcs_build, StateVector};
use crate::witnesses;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVARIANT: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

/// Effective run configuration after merging defaults, config file and flags.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub n_max: usize,
    pub tolerance: f64,
    pub alpha: Option<(f64, f64)>,
    pub zeta: Option<(f64, f64)>,
    pub r: Option<f64>,
    pub theta: f64,
    pub s: Option<f64>,
    pub kind: Option<String>,
    pub level: usize,
    pub n_terms: usize,
    pub window: Option<(f64, f64, f64, f64)>,
    pub resolution: (usize, usize),
    pub out: Option<String>,
    pub format: Option<OutputFormat>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            n_max: 200,
            tolerance: 1e-10,
            alpha: None,
            zeta: None,
            r: None,
            theta: 0.0,
            s: None,
            kind: None,
            level: 0,
            n_terms: 60,
            window: None,
            resolution: (201, 201),
            out: None,
            format: None,
        }
    }
}

const CONFIG_KEYS: &[&str] = &[
    "n_max",
    "tolerance",
    "alpha",
    "zeta",
    "r",
    "theta",
    "s",
    "kind",
    "level",
    "n_terms",
    "window",
    "resolution",
    "out",
    "format",
];

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::Truncation { .. }
            | Error::NonFinite(_)
            | Error::DegenerateWitness { .. }
            | Error::UndefinedWitness(_) => EXIT_INVARIANT,
            Error::Domain(_)
            | Error::Usage(_)
            | Error::Range { .. }
            | Error::BasisMismatch
            | Error::UnsupportedState { .. } => EXIT_USAGE,
        };
        CliError {
            code,
            message: err.to_string(),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "isonlcs",
    version,
    about = "Deformed ladder algebra, nonlinear coherent states and \
             non-classicality diagnostics for the generalized isotonic oscillator"
)]
struct Cli {
    #[command(subcommand)]
    command: CommandKind,
}

#[derive(Debug, Subcommand)]
enum CommandKind {
    /// Verify all seven ladder-algebra identities; emits the residuals
    AlgebraCheck(CommonArgs),
    /// Sample one eigenfunction and its derivative on an x grid
    Eigen(CommonArgs),
    /// Verify orthonormality, the eigenvalue equation and the differential
    /// ladder actions of the eigenbasis
    EigenCheck(CommonArgs),
    /// Amplitudes and occupation probabilities of one state
    State(CommonArgs),
    /// Growth diagnosis of the dual-pair series
    DualCheck(CommonArgs),
    /// A3, Mandel Q, g2(0) and mean occupation across an r sweep
    Stats(CommonArgs),
    /// Quadrature and amplitude-squared squeezing witnesses across theta
    Squeeze(CommonArgs),
    /// Quadrature distribution P(x, phi)
    QuadratureDist(CommonArgs),
    /// Wigner, Husimi or general s-parameterized quasi-probability grid
    Quasiprob(CommonArgs),
    /// Singular P-function coefficients
    Pfunction(CommonArgs),
    /// Photon statistics of one canonical coherent state
    CanonicalStats(CommonArgs),
}

impl CommandKind {
    fn name(&self) -> &'static str {
        match self {
            CommandKind::AlgebraCheck(_) => "algebra-check",
            CommandKind::Eigen(_) => "eigen",
            CommandKind::EigenCheck(_) => "eigen-check",
            CommandKind::State(_) => "state",
            CommandKind::DualCheck(_) => "dual-check",
            CommandKind::Stats(_) => "stats",
            CommandKind::Squeeze(_) => "squeeze",
            CommandKind::QuadratureDist(_) => "quadrature-dist",
            CommandKind::Quasiprob(_) => "quasiprob",
            CommandKind::Pfunction(_) => "pfunction",
            CommandKind::CanonicalStats(_) => "canonical-stats",
        }
    }

    fn args(&self) -> &CommonArgs {
        match self {
            CommandKind::AlgebraCheck(a)
            | CommandKind::Eigen(a)
            | CommandKind::EigenCheck(a)
            | CommandKind::State(a)
            | CommandKind::DualCheck(a)
            | CommandKind::Stats(a)
            | CommandKind::Squeeze(a)
            | CommandKind::QuadratureDist(a)
            | CommandKind::Quasiprob(a)
            | CommandKind::Pfunction(a)
            | CommandKind::CanonicalStats(a) => a,
        }
    }
}

#[derive(Debug, Args, Default, Clone)]
struct CommonArgs {
    /// Basis truncation: highest shifted index (default 200)
    #[arg(long = "n-max")]
    n_max: Option<usize>,
    /// Residual tolerance for verification commands (default 1e-10)
    #[arg(long)]
    tol: Option<f64>,
    /// Nonlinear coherent state parameter
    #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
    alpha: Option<Vec<f64>>,
    /// Canonical coherent state parameter
    #[arg(long, num_args = 2, value_names = ["RE", "IM"], allow_negative_numbers = true)]
    zeta: Option<Vec<f64>>,
    /// Radial coherent-state amplitude for sweeps
    #[arg(long, allow_negative_numbers = true)]
    r: Option<f64>,
    /// Phase of alpha for the stats sweep (default 0)
    #[arg(long, allow_negative_numbers = true)]
    theta: Option<f64>,
    /// Grid window
    #[arg(long, num_args = 4, value_names = ["X0", "X1", "Y0", "Y1"], allow_negative_numbers = true)]
    window: Option<Vec<f64>>,
    /// Grid resolution (default 201 201)
    #[arg(long, num_args = 2, value_names = ["NX", "NY"])]
    resolution: Option<Vec<usize>>,
    /// Ordering parameter for `quasiprob --kind sgeneral`
    #[arg(long, allow_negative_numbers = true)]
    s: Option<f64>,
    /// Quasi-probability kind: wigner | husimi | sgeneral
    #[arg(long)]
    kind: Option<String>,
    /// Eigenfunction level for `eigen` (default 0)
    #[arg(long)]
    level: Option<usize>,
    /// Number of dual-series terms for `dual-check` (default 60)
    #[arg(long = "n-terms")]
    n_terms: Option<usize>,
    /// Output artifact path (default: <command>.<ext> in $ISONLCS_OUT_DIR or .)
    #[arg(long)]
    out: Option<PathBuf>,
    /// JSON config file; flags override file values override defaults
    #[arg(long)]
    config: Option<PathBuf>,
    /// Artifact format (default csv for tables, json for reports)
    #[arg(long)]
    format: Option<String>,
}

fn json_f64(value: &serde_json::Value, key: &str) -> Result<f64, CliError> {
    value
        .as_f64()
        .ok_or_else(|| CliError::usage(format!("config key '{key}' must be a number")))
}

fn json_pair(value: &serde_json::Value, key: &str) -> Result<(f64, f64), CliError> {
    let arr = value
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| CliError::usage(format!("config key '{key}' must be [re, im]")))?;
    Ok((json_f64(&arr[0], key)?, json_f64(&arr[1], key)?))
}

/// Merge a JSON config file into `config`. Unknown keys are an error listing
/// them, so typos never silently fall back to defaults.
fn apply_config_file(config: &mut RunConfig, path: &Path) -> Result<(), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::usage(format!("cannot read config file {}: {e}", path.display())))?;
    let value: serde_json::Value = serde_json::from_str(&text).map_err(|e| {
        CliError::usage(format!(
            "config file {} is not valid JSON: {e}",
            path.display()
        ))
    })?;
    let obj = value
        .as_object()
        .ok_or_else(|| CliError::usage("config file must hold a JSON object"))?;
    let unknown: Vec<&str> = obj
        .keys()
        .map(String::as_str)
        .filter(|k| !CONFIG_KEYS.contains(k))
        .collect();
    if !unknown.is_empty() {
        return Err(CliError::usage(format!(
            "unknown config keys: {}",
            unknown.join(", ")
        )));
    }
    for (key, val) in obj {
        match key.as_str() {
            "n_max" => {
                config.n_max = val
                    .as_u64()
                    .ok_or_else(|| CliError::usage("config key 'n_max' must be an integer"))?
                    as usize
            }
            "tolerance" => config.tolerance = json_f64(val, "tolerance")?,
            "alpha" => config.alpha = Some(json_pair(val, "alpha")?),
            "zeta" => config.zeta = Some(json_pair(val, "zeta")?),
            "r" => config.r = Some(json_f64(val, "r")?),
            "theta" => config.theta = json_f64(val, "theta")?,
            "s" => config.s = Some(json_f64(val, "s")?),
            "kind" => {
                config.kind = Some(
                    val.as_str()
                        .ok_or_else(|| CliError::usage("config key 'kind' must be a string"))?
                        .to_string(),
                )
            }
            "level" => {
                config.level = val
                    .as_u64()
                    .ok_or_else(|| CliError::usage("config key 'level' must be an integer"))?
                    as usize
            }
            "n_terms" => {
                config.n_terms = val
                    .as_u64()
                    .ok_or_else(|| CliError::usage("config key 'n_terms' must be an integer"))?
                    as usize
            }
            "window" => {
                let arr = val
                    .as_array()
                    .filter(|a| a.len() == 4)
                    .ok_or_else(|| CliError::usage("config key 'window' must be [x0,x1,y0,y1]"))?;
                config.window = Some((
                    json_f64(&arr[0], "window")?,
                    json_f64(&arr[1], "window")?,
                    json_f64(&arr[2], "window")?,
                    json_f64(&arr[3], "window")?,
                ));
            }
            "resolution" => {
                let arr = val
                    .as_array()
                    .filter(|a| a.len() == 2)
                    .ok_or_else(|| CliError::usage("config key 'resolution' must be [nx, ny]"))?;
                let nx = arr[0]
                    .as_u64()
                    .ok_or_else(|| CliError::usage("config key 'resolution' must hold integers"))?;
                let ny = arr[1]
                    .as_u64()
                    .ok_or_else(|| CliError::usage("config key 'resolution' must hold integers"))?;
                config.resolution = (nx as usize, ny as usize);
            }
            "out" => {
                config.out = Some(
                    val.as_str()
                        .ok_or_else(|| CliError::usage("config key 'out' must be a string"))?
                        .to_string(),
                )
            }
            "format" => {
                config.format =
                    Some(parse_format(val.as_str().ok_or_else(|| {
                        CliError::usage("config key 'format' must be a string")
                    })?)?)
            }
            _ => unreachable!("unknown keys rejected above"),
        }
    }
    Ok(())
}

fn parse_format(text: &str) -> Result<OutputFormat, CliError> {
    match text {
        "csv" => Ok(OutputFormat::Csv),
        "json" => Ok(OutputFormat::Json),
        other => Err(CliError::usage(format!(
            "unknown format '{other}' (expected csv or json)"
        ))),
    }
}

/// Build the effective configuration: defaults, then the config file, then
/// command-line flags.
fn parse_config(args: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut config = RunConfig::default();
    if let Some(path) = &args.config {
        apply_config_file(&mut config, path)?;
    }
    if let Some(v) = args.n_max {
        config.n_max = v;
    }
    if let Some(v) = args.tol {
        config.tolerance = v;
    }
    if let Some(v) = &args.alpha {
        config.alpha = Some((v[0], v[1]));
    }
    if let Some(v) = &args.zeta {
        config.zeta = Some((v[0], v[1]));
    }
    if let Some(v) = args.r {
        config.r = Some(v);
    }
    if let Some(v) = args.theta {
        config.theta = v;
    }
    if let Some(v) = args.s {
        config.s = Some(v);
    }
    if let Some(v) = &args.kind {
        config.kind = Some(v.clone());
    }
    if let Some(v) = args.level {
        config.level = v;
    }
    if let Some(v) = args.n_terms {
        config.n_terms = v;
    }
    if let Some(v) = &args.window {
        config.window = Some((v[0], v[1], v[2], v[3]));
    }
    if let Some(v) = &args.resolution {
        config.resolution = (v[0], v[1]);
    }
    if let Some(v) = &args.out {
        config.out = Some(v.display().to_string());
    }
    if let Some(v) = &args.format {
        config.format = Some(parse_format(v)?);
    }

    if config.n_max < 16 {
        return Err(CliError::usage(format!(
            "n_max must be at least 16, got {}",
            config.n_max
        )));
    }
    if !(config.tolerance > 0.0 && config.tolerance <= 1e-4) {
        return Err(CliError::usage(format!(
            "tolerance must lie in (0, 1e-4], got {}",
            config.tolerance
        )));
    }
    if config.resolution.0 < 2 || config.resolution.1 < 2 {
        return Err(CliError::usage("resolution must be at least 2 x 2"));
    }
    Ok(config)
}

/// Hash of the effective configuration, excluding the output path so that
/// identical computations hash identically wherever they are written.
fn config_hash(command: &str, config: &RunConfig) -> String {
    let mut hashed = config.clone();
    hashed.out = None;
    let canonical = serde_json::to_string(&hashed).expect("config serializes");
    let digest = Sha256::digest(format!("{command}:{canonical}").as_bytes());
    let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
    hex[..16].to_string()
}

fn fmt_float(x: f64) -> String {
    // 17 significant digits
    format!("{x:.16e}")
}

#[derive(Debug, Clone)]
enum Cell {
    Int(i64),
    Float(f64),
    Blank,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_float(*v),
            Cell::Blank => String::new(),
        }
    }
}

struct Table {
    columns: Vec<&'static str>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    fn render(&self, format: OutputFormat, hash: &str) -> String {
        match format {
            OutputFormat::Csv => {
                let mut out = format!("# config-hash: {hash}\n");
                out.push_str(&self.columns.join(","));
                out.push('\n');
                for row in &self.rows {
                    let cells: Vec<String> = row.iter().map(Cell::render).collect();
                    out.push_str(&cells.join(","));
                    out.push('\n');
                }
                out
            }
            OutputFormat::Json => {
                let mut out = String::from("{\n");
                out.push_str(&format!("  \"config_hash\": \"{hash}\",\n"));
                out.push_str(&format!(
                    "  \"columns\": [{}],\n",
                    self.columns
                        .iter()
                        .map(|c| format!("\"{c}\""))
                        .collect::<Vec<_>>()
                        .join(", ")
                ));
                out.push_str("  \"rows\": [\n");
                for (i, row) in self.rows.iter().enumerate() {
                    let cells: Vec<String> = row
                        .iter()
                        .map(|c| match c {
                            Cell::Blank => "null".to_string(),
                            other => other.render(),
                        })
                        .collect();
                    let sep = if i + 1 == self.rows.len() { "" } else { "," };
                    out.push_str(&format!("    [{}]{sep}\n", cells.join(", ")));
                }
                out.push_str("  ]\n}\n");
                out
            }
        }
    }
}

#[derive(Debug, Clone)]
enum DocValue {
    Float(f64),
    Int(i64),
    Text(String),
    FloatArray(Vec<f64>),
}

struct Document {
    entries: Vec<(&'static str, DocValue)>,
}

impl Document {
    fn render(&self, format: OutputFormat, hash: &str) -> String {
        match format {
            OutputFormat::Json => {
                let mut out = String::from("{\n");
                out.push_str(&format!("  \"config_hash\": \"{hash}\""));
                for (key, value) in &self.entries {
                    out.push_str(",\n");
                    match value {
                        DocValue::Float(v) => {
                            out.push_str(&format!("  \"{key}\": {}", fmt_float(*v)))
                        }
                        DocValue::Int(v) => out.push_str(&format!("  \"{key}\": {v}")),
                        DocValue::Text(v) => out.push_str(&format!("  \"{key}\": \"{v}\"")),
                        DocValue::FloatArray(vs) => {
                            let body: Vec<String> = vs.iter().map(|v| fmt_float(*v)).collect();
                            out.push_str(&format!("  \"{key}\": [{}]", body.join(", ")));
                        }
                    }
                }
                out.push_str("\n}\n");
                out
            }
            OutputFormat::Csv => {
                let mut out = format!("# config-hash: {hash}\nkey,value\n");
                for (key, value) in &self.entries {
                    match value {
                        DocValue::Float(v) => out.push_str(&format!("{key},{}\n", fmt_float(*v))),
                        DocValue::Int(v) => out.push_str(&format!("{key},{v}\n")),
                        DocValue::Text(v) => out.push_str(&format!("{key},{v}\n")),
                        DocValue::FloatArray(vs) => {
                            for (i, v) in vs.iter().enumerate() {
                                out.push_str(&format!("{key}[{i}],{}\n", fmt_float(*v)));
                            }
                        }
                    }
                }
                out
            }
        }
    }
}

enum Artifact {
    Table(Table),
    Document(Document),
}

impl Artifact {
    fn default_format(&self) -> OutputFormat {
        match self {
            Artifact::Table(_) => OutputFormat::Csv,
            Artifact::Document(_) => OutputFormat::Json,
        }
    }

    fn render(&self, format: OutputFormat, hash: &str) -> String {
        match self {
            Artifact::Table(t) => t.render(format, hash),
            Artifact::Document(d) => d.render(format, hash),
        }
    }
}

struct CommandOutput {
    artifact: Artifact,
    /// Extra artifacts written next to the main one: (suffix, content).
    sidecars: Vec<(String, String)>,
    /// Invariant violation detected while computing; the artifact is still
    /// written, then the process exits 2 with this message.
    violation: Option<String>,
}

impl CommandOutput {
    fn new(artifact: Artifact) -> Self {
        CommandOutput {
            artifact,
            sidecars: Vec::new(),
            violation: None,
        }
    }
}

fn state_from_config(config: &RunConfig, basis: &TruncatedBasis) -> Result<StateVector, CliError> {
    match (config.alpha, config.zeta) {
        (Some((re, im)), None) => Ok(nlcs_build(Complex64::new(re, im), basis)?),
        (None, Some((re, im))) => Ok(canonical_build(Complex64::new(re, im), basis)?),
        (None, None) => Err(CliError::usage(
            "this command needs a state: pass exactly one of --alpha RE IM or --zeta RE IM",
        )),
        (Some(_), Some(_)) => Err(CliError::usage(
            "--alpha and --zeta are mutually exclusive; pass exactly one",
        )),
    }
}

fn run_algebra_check(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let basis = TruncatedBasis::new(config.n_max)?;
    let mut entries = Vec::new();
    let mut worst: Option<(&'static str, f64)> = None;
    for which in AlgebraIdentity::ALL {
        let residual = algebra_residual(&basis, which);
        if residual >= config.tolerance && worst.map(|(_, w)| residual > w).unwrap_or(true) {
            worst = Some((which.name(), residual));
        }
        entries.push((which.name(), DocValue::Float(residual)));
    }
    let mut output = CommandOutput::new(Artifact::Document(Document { entries }));
    if let Some((name, residual)) = worst {
        output.violation = Some(format!(
            "algebra identity {name} violates tolerance: residual {residual:.3e} >= {:.3e}",
            config.tolerance
        ));
    }
    Ok(output)
}

fn run_eigen(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let (x0, x1) = config
        .window
        .map(|(a, b, _, _)| (a, b))
        .unwrap_or((-8.0, 8.0));
    let xs = quasiprob::axis(x0, x1, config.resolution.0);
    let f = eigenbasis::EigenFunction::build(config.level, &xs)?;
    let rows = xs
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            vec![
                Cell::Float(x),
                Cell::Float(f.values[i]),
                Cell::Float(f.derivative_values[i]),
            ]
        })
        .collect();
    Ok(CommandOutput::new(Artifact::Table(Table {
        columns: vec!["x", "psi_n", "dpsi_n"],
        rows,
    })))
}

fn run_eigen_check(_config: &RunConfig) -> Result<CommandOutput, CliError> {
    let (xs, ws) = eigenbasis::default_quadrature();
    let l2 = |f: &[f64]| -> f64 {
        ws.iter()
            .zip(f.iter())
            .map(|(&w, &v)| w * v * v)
            .sum::<f64>()
            .sqrt()
    };
    let levels: Vec<usize> = std::iter::once(0).chain(3..=12).collect();
    let samples: Vec<Vec<f64>> = levels
        .iter()
        .map(|&n| {
            xs.iter()
                .map(|&x| eigenbasis::psi(n, x).map_err(CliError::from))
                .collect::<Result<_, _>>()
        })
        .collect::<Result<_, _>>()?;
    let mut gram_residual: f64 = 0.0;
    for (i, fi) in samples.iter().enumerate() {
        for (j, fj) in samples.iter().enumerate() {
            let overlap: f64 = ws
                .iter()
                .zip(fi.iter().zip(fj.iter()))
                .map(|(&w, (&a, &b))| w * a * b)
                .sum();
            let expect = if i == j { 1.0 } else { 0.0 };
            gram_residual = gram_residual.max((overlap - expect).abs());
        }
    }

    let mut schroedinger_residual: f64 = 0.0;
    for &n in levels.iter().filter(|&&n| n <= 10) {
        let res: Vec<f64> = xs
            .iter()
            .map(|&x| {
                let (v, _, d2) = eigenbasis::psi_derivatives(n, x)?;
                Ok::<f64, Error>(
                    -0.5 * d2 + eigenbasis::potential(x) * v - eigenbasis::energy(n) * v,
                )
            })
            .collect::<Result<_, _>>()?;
        schroedinger_residual = schroedinger_residual.max(l2(&res));
    }

    let mut ladder_lower: f64 = 0.0;
    let mut ladder_raise: f64 = 0.0;
    for n in 4..=10usize {
        let lowered = eigenbasis::apply_differential_ladder(n, LadderDirection::Lower, &xs)?;
        let f = crate::fockspace::deformation_f(n as i64)?.value;
        let diff: Vec<f64> = xs
            .iter()
            .zip(lowered.iter())
            .map(|(&x, &v)| {
                Ok::<f64, Error>(v - (n as f64).sqrt() * f * eigenbasis::psi(n - 1, x)?)
            })
            .collect::<Result<_, _>>()?;
        ladder_lower = ladder_lower.max(l2(&diff));

        let raised = eigenbasis::apply_differential_ladder(n, LadderDirection::Raise, &xs)?;
        let f1 = crate::fockspace::deformation_f(n as i64 + 1)?.value;
        let diff: Vec<f64> = xs
            .iter()
            .zip(raised.iter())
            .map(|(&x, &v)| {
                Ok::<f64, Error>(v - ((n + 1) as f64).sqrt() * f1 * eigenbasis::psi(n + 1, x)?)
            })
            .collect::<Result<_, _>>()?;
        ladder_raise = ladder_raise.max(l2(&diff));
    }

    let lower3 = eigenbasis::apply_differential_ladder(3, LadderDirection::Lower, &xs)?;
    let lower0 = eigenbasis::apply_differential_ladder(0, LadderDirection::Lower, &xs)?;
    let raise0 = eigenbasis::apply_differential_ladder(0, LadderDirection::Raise, &xs)?;
    let isolated = l2(&lower3).max(l2(&lower0)).max(l2(&raise0));

    let pass = gram_residual < 1e-8
        && schroedinger_residual < 1e-6
        && ladder_lower < 1e-6
        && ladder_raise < 1e-6
        && isolated < 1e-8;
    let entries = vec![
        ("gram_residual", DocValue::Float(gram_residual)),
        (
            "schroedinger_residual",
            DocValue::Float(schroedinger_residual),
        ),
        ("ladder_lower_residual", DocValue::Float(ladder_lower)),
        ("ladder_raise_residual", DocValue::Float(ladder_raise)),
        ("isolated_ground_residual", DocValue::Float(isolated)),
        ("pass", DocValue::Text(pass.to_string())),
    ];
    let mut output = CommandOutput::new(Artifact::Document(Document { entries }));
    if !pass {
        output.violation = Some("eigenbasis verification exceeded tolerances".to_string());
    }
    Ok(output)
}

fn run_state(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let basis = TruncatedBasis::new(config.n_max)?;
    let state = state_from_config(config, &basis)?;
    let rows = state
        .amplitudes()
        .iter()
        .enumerate()
        .map(|(n, c)| {
            vec![
                Cell::Int(n as i64),
                Cell::Float(c.re),
                Cell::Float(c.im),
                Cell::Float(c.norm_sqr()),
            ]
        })
        .collect();
    Ok(CommandOutput::new(Artifact::Table(Table {
        columns: vec!["n", "re_c", "im_c", "P_n"],
        rows,
    })))
}

fn run_dual_check(config: &RunConfig, hash: &str) -> Result<CommandOutput, CliError> {
    let (re, im) = config
        .alpha
        .ok_or_else(|| CliError::usage("dual-check needs --alpha RE IM"))?;
    let report = dual_series_diagnose(Complex64::new(re, im), config.n_terms)?;
    let rows = report
        .term_log_magnitudes
        .iter()
        .enumerate()
        .map(|(n, &log_term)| {
            let ratio = report
                .ratio_trend
                .get(n)
                .map(|&v| Cell::Float(v))
                .unwrap_or(Cell::Blank);
            vec![Cell::Int(n as i64), Cell::Float(log_term), ratio]
        })
        .collect();
    let verdict = format!(
        "{{\n  \"config_hash\": \"{hash}\",\n  \"alpha_modulus\": {},\n  \"verdict\": \"{}\"\n}}\n",
        fmt_float(report.alpha_modulus),
        report.verdict.as_str()
    );
    let mut output = CommandOutput::new(Artifact::Table(Table {
        columns: vec!["n", "log_term", "log_ratio"],
        rows,
    }));
    output.sidecars.push((".verdict.json".to_string(), verdict));
    Ok(output)
}

fn run_stats(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let basis = TruncatedBasis::new(config.n_max)?;
    let ops = witnesses::WitnessOperators::build(&basis);
    let r_grid = match config.r {
        Some(r) => vec![r],
        None => witnesses::default_r_grid(),
    };
    let rows = witnesses::stats_sweep(&basis, &ops, &r_grid, config.theta)?
        .into_iter()
        .map(|row| {
            vec![
                Cell::Float(row.r),
                Cell::Float(row.a3),
                Cell::Float(row.q),
                Cell::Float(row.g2),
                Cell::Float(row.mean_k0),
            ]
        })
        .collect();
    Ok(CommandOutput::new(Artifact::Table(Table {
        columns: vec!["r", "A3", "Q", "g2", "meanK0"],
        rows,
    })))
}

fn run_canonical_stats(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let (re, im) = config
        .zeta
        .ok_or_else(|| CliError::usage("canonical-stats needs --zeta RE IM"))?;
    let basis = TruncatedBasis::new(config.n_max)?;
    let ops = witnesses::WitnessOperators::build(&basis);
    let state = canonical_build(Complex64::new(re, im), &basis)?;
    let row = witnesses::stats_row(&state, &ops)?;
    Ok(CommandOutput::new(Artifact::Table(Table {
        columns: vec!["r", "A3", "Q", "g2", "meanK0"],
        rows: vec![vec![
            Cell::Float(row.r),
            Cell::Float(row.a3),
            Cell::Float(row.q),
            Cell::Float(row.g2),
            Cell::Float(row.mean_k0),
        ]],
    })))
}

fn run_squeeze(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let basis = TruncatedBasis::new(config.n_max)?;
    let ops = witnesses::WitnessOperators::build(&basis);
    let r = config.r.unwrap_or(5.0);
    let thetas = witnesses::default_theta_grid();
    let rows = witnesses::squeeze_sweep(&basis, &ops, r, &thetas)?
        .into_iter()
        .map(|rep| {
            vec![
                Cell::Float(rep.theta),
                Cell::Float(rep.i1),
                Cell::Float(rep.i2),
                Cell::Float(rep.i3),
                Cell::Float(rep.i4),
                Cell::Float(rep.var_x),
                Cell::Float(rep.var_p),
            ]
        })
        .collect();
    Ok(CommandOutput::new(Artifact::Table(Table {
        columns: vec!["theta", "I1", "I2", "I3", "I4", "var_x", "var_p"],
        rows,
    })))
}

fn run_quadrature_dist(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let basis = TruncatedBasis::new(config.n_max)?;
    let state = state_from_config(config, &basis)?;
    let (x0, x1, p0, p1) =
        config
            .window
            .unwrap_or((-6.0, 6.0, -std::f64::consts::PI, std::f64::consts::PI));
    let xs = quasiprob::axis(x0, x1, config.resolution.0);
    let phis = quasiprob::axis(p0, p1, config.resolution.1);
    let grid = quasiprob::quadrature_distribution(&state, &xs, &phis);
    let mut rows = Vec::with_capacity(xs.len() * phis.len());
    for (ix, &x) in xs.iter().enumerate() {
        for (iphi, &phi) in phis.iter().enumerate() {
            rows.push(vec![
                Cell::Float(x),
                Cell::Float(phi),
                Cell::Float(grid.value(ix, iphi)),
            ]);
        }
    }
    Ok(CommandOutput::new(Artifact::Table(Table {
        columns: vec!["x", "phi", "value"],
        rows,
    })))
}

fn run_quasiprob(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let basis = TruncatedBasis::new(config.n_max)?;
    let state = state_from_config(config, &basis)?;
    let kind_text = config
        .kind
        .as_deref()
        .ok_or_else(|| CliError::usage("quasiprob needs --kind wigner|husimi|sgeneral"))?;
    let (kind, s) = match kind_text {
        "wigner" => (GridKind::Wigner, 0.0),
        "husimi" => (GridKind::Husimi, -1.0),
        "sgeneral" => {
            let s = config
                .s
                .ok_or_else(|| CliError::usage("quasiprob --kind sgeneral needs --s"))?;
            if s >= 1.0 {
                return Err(CliError::usage(
                    "s must be < 1; the s = 1 singular P-function regime is served by `pfunction`",
                ));
            }
            (GridKind::SGeneral, s)
        }
        other => {
            return Err(CliError::usage(format!(
                "unknown quasiprob kind '{other}' (expected wigner, husimi or sgeneral)"
            )))
        }
    };
    let window = config
        .window
        .unwrap_or_else(|| quasiprob::default_window(&state));
    let grid = quasiprob::phase_grid(&state, kind, s, window, config.resolution)?;
    let mut violation = None;
    if kind == GridKind::Husimi {
        let (min, _, _) = grid.min();
        if min < -1e-12 {
            violation = Some(format!(
                "husimi grid violates non-negativity: min = {min:.3e}"
            ));
        }
    }
    let xs = grid.axis_x();
    let ps = grid.axis_y();
    let mut rows = Vec::with_capacity(xs.len() * ps.len());
    for (ix, &x) in xs.iter().enumerate() {
        for (ip, &p) in ps.iter().enumerate() {
            rows.push(vec![
                Cell::Float(x),
                Cell::Float(p),
                Cell::Float(grid.value(ix, ip)),
            ]);
        }
    }
    let mut output = CommandOutput::new(Artifact::Table(Table {
        columns: vec!["x", "p", "value"],
        rows,
    }));
    output.violation = violation;
    Ok(output)
}

fn run_pfunction(config: &RunConfig) -> Result<CommandOutput, CliError> {
    let basis = TruncatedBasis::new(config.n_max)?;
    let state = state_from_config(config, &basis)?;
    let singular = quasiprob::p_function_coefficients(&state)?;
    let entries = vec![
        ("order", DocValue::Int(singular.max_order as i64)),
        (
            "coefficients",
            DocValue::FloatArray(singular.coefficients.clone()),
        ),
    ];
    Ok(CommandOutput::new(Artifact::Document(Document { entries })))
}

fn resolve_out_path(command: &str, config: &RunConfig, format: OutputFormat) -> PathBuf {
    if let Some(out) = &config.out {
        return PathBuf::from(out);
    }
    let ext = match format {
        OutputFormat::Csv => "csv",
        OutputFormat::Json => "json",
    };
    let dir = std::env::var("ISONLCS_OUT_DIR").unwrap_or_else(|_| ".".to_string());
    Path::new(&dir).join(format!("{command}.{ext}"))
}

fn execute(command: &CommandKind, config: &RunConfig) -> Result<CommandOutput, CliError> {
    let hash = config_hash(command.name(), config);
    match command {
        CommandKind::AlgebraCheck(_) => run_algebra_check(config),
        CommandKind::Eigen(_) => run_eigen(config),
        CommandKind::EigenCheck(_) => run_eigen_check(config),
        CommandKind::State(_) => run_state(config),
        CommandKind::DualCheck(_) => run_dual_check(config, &hash),
        CommandKind::Stats(_) => run_stats(config),
        CommandKind::Squeeze(_) => run_squeeze(config),
        CommandKind::QuadratureDist(_) => run_quadrature_dist(config),
        CommandKind::Quasiprob(_) => run_quasiprob(config),
        CommandKind::Pfunction(_) => run_pfunction(config),
        CommandKind::CanonicalStats(_) => run_canonical_stats(config),
    }
}

/// Parse argv, run the selected command, write its artifacts, and return the
/// process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(err) => {
            // clap renders --help/--version through the error path with a
            // success status
            let code = if err.use_stderr() {
                EXIT_USAGE
            } else {
                EXIT_OK
            };
            let _ = err.print();
            return code;
        }
    };
    let config = match parse_config(cli.command.args()) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("isonlcs: {}", err.message);
            return err.code;
        }
    };
    let output = match execute(&cli.command, &config) {
        Ok(output) => output,
        Err(err) => {
            eprintln!("isonlcs: {}", err.message);
            return err.code;
        }
    };

    let hash = config_hash(cli.command.name(), &config);
    let format = config
        .format
        .unwrap_or_else(|| output.artifact.default_format());
    let out_path = resolve_out_path(cli.command.name(), &config, format);
    let rendered = output.artifact.render(format, &hash);
    if let Err(e) = std::fs::write(&out_path, rendered) {
        eprintln!("isonlcs: cannot write {}: {e}", out_path.display());
        return EXIT_USAGE;
    }
    for (suffix, content) in &output.sidecars {
        let path = sidecar_path(&out_path, suffix);
        if let Err(e) = std::fs::write(&path, content) {
            eprintln!("isonlcs: cannot write {}: {e}", path.display());
            return EXIT_USAGE;
        }
    }
    // reproducibility echo: the effective configuration next to the artifact
    let mut echoed = config.clone();
    echoed.out = Some(out_path.display().to_string());
    let echo = serde_json::to_string_pretty(&echoed).expect("config serializes");
    let echo_path = sidecar_path(&out_path, ".config.json");
    if let Err(e) = std::fs::write(&echo_path, echo) {
        eprintln!("isonlcs: cannot write {}: {e}", echo_path.display());
        return EXIT_USAGE;
    }
    if let Some(message) = &output.violation {
        eprintln!("isonlcs: {message}");
        return EXIT_INVARIANT;
    }
    println!("{}", out_path.display());
    EXIT_OK
}

fn sidecar_path(out: &Path, suffix: &str) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(suffix);
    out.with_file_name(name)
}
