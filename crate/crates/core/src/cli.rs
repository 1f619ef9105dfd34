//! Command-line front end.
//!
//! Exit codes: 0 ok, 1 usage, 2 state validation, 3 computation
//! precondition, 4 suite failure.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::correlations::{
    chi_curves, classical_correlation, find_crossing, mutual_information, tangent_interval, Strategy,
};
use crate::dynamics::{correlation_trajectory, detect_transition, DampingSpec, DEFAULT_HORIZON, TRAJECTORY_HEADER};
use crate::error::DiscordError;
use crate::steering::{apex_limits, ellipsoid_params};
use crate::suites::run_all;
use crate::xstate::{RawXState, XState};

pub const THREADS_ENV: &str = "DISCORD_KIT_THREADS";
pub const SIGNIFICANT_DIGITS: usize = 12;

#[derive(Debug, Parser)]
#[command(name = "discord-kit", version, about = "Classical correlation and discord of two-qubit X states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Ellipsoid, mutual information and per-strategy correlations as JSON.
    Analyze(AnalyzeArgs),
    /// χ curves along the filter family as CSV, with a JSON footer.
    FilterSweep(FilterSweepArgs),
    /// Correlations under two-sided phase damping as CSV, with a JSON footer.
    DampSweep(DampSweepArgs),
    /// Runs the invariant suites over seeded random states.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct StateSource {
    /// Inline state `a,b,c,d,u,v`.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true)]
    pub state: Option<Vec<f64>>,
    /// JSON file holding `{a,b,c,d,u,v}` or a six-element array.
    #[arg(long)]
    pub state_file: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StrategyName {
    Hv,
    Three,
    Brute,
}

#[derive(Debug, Args)]
pub struct Common {
    #[command(flatten)]
    pub source: StateSource,
    /// Output path; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_delimiter = ',', default_value = "hv,three")]
    pub strategies: Vec<StrategyName>,
    /// Restarts for the brute-force strategy.
    #[arg(long, default_value_t = 200)]
    pub restarts: usize,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub common: Common,
}

#[derive(Debug, Args)]
pub struct FilterSweepArgs {
    #[command(flatten)]
    pub common: Common,
    #[arg(long, default_value_t = 512, value_parser = clap::value_parser!(u64).range(8..))]
    pub grid: u64,
}

#[derive(Debug, Args)]
pub struct DampSweepArgs {
    #[command(flatten)]
    pub common: Common,
    /// Phase damping rate Γ.
    #[arg(long, allow_negative_numbers = true)]
    pub gamma_rate: f64,
    /// End of the time grid; defaults to 5/Γ (or 5 when Γ = 0).
    #[arg(long, allow_negative_numbers = true)]
    pub t_max: Option<f64>,
    #[arg(long, default_value_t = 200, value_parser = clap::value_parser!(u64).range(8..))]
    pub grid: u64,
    /// Log-spaced times over this many decades instead of a uniform grid.
    #[arg(long)]
    pub log_decades: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ValidateArgs {
    #[arg(long, default_value_t = 1000)]
    pub states: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Perturb the Pauli basis change used by the filter-invariance suite.
    #[arg(long)]
    pub inject_fault: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Validation(DiscordError),
    #[error("{0}")]
    Precondition(String),
    #[error("{0} suite(s) failed")]
    SuiteFailure(usize),
    #[error("{0}")]
    Io(#[from] io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Precondition(_) | CliError::Io(_) => 3,
            CliError::SuiteFailure(_) => 4,
        }
    }
}

impl From<DiscordError> for CliError {
    fn from(e: DiscordError) -> Self {
        match e {
            DiscordError::NonHermitianInput { .. }
            | DiscordError::UnphysicalState { .. }
            | DiscordError::NotNormalized { .. }
            | DiscordError::NegativeParameter { .. }
            | DiscordError::PositivityViolation { .. } => CliError::Validation(e),
            other => CliError::Precondition(other.to_string()),
        }
    }
}

/// `%g`-style formatting with [`SIGNIFICANT_DIGITS`] significant digits.
pub fn fmt_g(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let p = SIGNIFICANT_DIGITS;
    let sci = format!("{:.*e}", p - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= p as i32 {
        format!("{}e{}{:02}", trim_zeros(mantissa), if exp < 0 { '-' } else { '+' }, exp.abs())
    } else {
        trim_zeros(&format!("{:.*}", (p as i32 - 1 - exp) as usize, x)).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rounds every float in a JSON tree to [`SIGNIFICANT_DIGITS`] digits.
fn round_json(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().expect("f64 number");
            json!(fmt_g(x).parse::<f64>().unwrap_or(x))
        }
        Value::Array(a) => Value::Array(a.into_iter().map(round_json).collect()),
        Value::Object(o) => Value::Object(o.into_iter().map(|(k, v)| (k, round_json(v))).collect()),
        other => other,
    }
}

fn to_json<T: Serialize>(v: &T) -> String {
    let value = serde_json::to_value(v).expect("serializable report");
    serde_json::to_string_pretty(&round_json(value)).expect("json") + "\n"
}

fn load_state(src: &StateSource) -> Result<XState, CliError> {
    if let Some(p) = &src.state {
        if p.len() != 6 {
            return Err(CliError::Usage(format!("--state needs six values a,b,c,d,u,v; got {}", p.len())));
        }
        return Ok(XState::from_slice(p)?);
    }
    let path = src.state_file.as_ref().expect("clap enforces one state source");
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
    let raw: RawXState = match value {
        Value::Array(_) => {
            let p: Vec<f64> = serde_json::from_value(value)
                .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
            return Ok(XState::from_slice(&p)?);
        }
        other => serde_json::from_value(other).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?,
    };
    Ok(XState::try_from(raw)?)
}

fn strategies(common: &Common) -> Vec<Strategy> {
    let mut out = Vec::new();
    for s in &common.strategies {
        let strategy = match s {
            StrategyName::Hv => Strategy::Hv,
            StrategyName::Three => Strategy::ThreeElement,
            StrategyName::Brute => Strategy::BruteForce { restarts: common.restarts, seed: common.seed },
        };
        if !out.contains(&strategy) {
            out.push(strategy);
        }
    }
    out
}

fn emit(out: Option<&Path>, body: &str, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => fs::write(p, body)?,
        None => stdout.write_all(body.as_bytes())?,
    }
    Ok(())
}

/// Footer goes to `<out>.footer.json`, or to stderr when writing to stdout.
fn emit_footer(out: Option<&Path>, footer: &str, stderr: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(p) => {
            let mut name = p.as_os_str().to_owned();
            name.push(".footer.json");
            fs::write(PathBuf::from(name), footer)?;
        }
        None => stderr.write_all(footer.as_bytes())?,
    }
    Ok(())
}

fn csv(header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> String {
    let mut s = header.join(",");
    s.push('\n');
    for row in rows {
        let cells: Vec<String> = row.into_iter().map(fmt_g).collect();
        writeln!(s, "{}", cells.join(",")).expect("write to string");
    }
    s
}

pub fn cmd_analyze(args: &AnalyzeArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let x = load_state(&args.common.source)?;
    let reports: Vec<_> = strategies(&args.common).into_iter().map(|s| classical_correlation(&x, s)).collect();
    let report = json!({
        "state": x,
        "ellipsoid": ellipsoid_params(&x).ok(),
        "mutual_info": mutual_information(&x),
        "reports": reports,
    });
    emit(args.common.out.as_deref(), &to_json(&report), stdout)
}

pub fn cmd_filter_sweep(args: &FilterSweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let x = load_state(&args.common.source)?;
    let (z_at_0, z_at_1) = apex_limits(&x)?;
    let curves = chi_curves(&x, args.grid as usize)?;
    let body = csv(
        &["xi", "z", "chi_h", "chi_v", "chi_3"],
        curves.iter().map(|p| vec![p.xi, p.z, p.chi_h, p.chi_v, p.chi_3]),
    );
    let crossing = find_crossing(&x);
    let tangent = match &crossing {
        Ok(_) => tangent_interval(&x).ok(),
        Err(_) => None,
    };
    let footer = json!({
        "apex_limits": { "xi_to_0": z_at_0, "xi_to_1": z_at_1 },
        "crossing": crossing.as_ref().ok(),
        "crossing_error": crossing.as_ref().err().map(|e| e.to_string()),
        "tangent_interval": tangent,
    });
    emit(args.common.out.as_deref(), &body, stdout)?;
    emit_footer(args.common.out.as_deref(), &to_json(&footer), stderr)
}

pub fn cmd_damp_sweep(args: &DampSweepArgs, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    let x = load_state(&args.common.source)?;
    let rate = args.gamma_rate;
    let t_max = args.t_max.unwrap_or(if rate > 0.0 { DEFAULT_HORIZON / rate } else { DEFAULT_HORIZON });
    let n = args.grid as usize;
    let spec = match args.log_decades {
        Some(dec) => DampingSpec::log_spaced(rate, t_max, n, dec)?,
        None => DampingSpec::uniform(rate, t_max, n)?,
    };
    let trajectory = correlation_trajectory(&x, &spec, &strategies(&args.common));
    let body = csv(
        &TRAJECTORY_HEADER,
        trajectory
            .points
            .iter()
            .map(|p| vec![p.t, p.gamma, p.chi_h, p.chi_v, p.c_hv, p.c_three, p.margin]),
    );
    let transition = detect_transition(&trajectory);
    let brute: Option<Vec<f64>> = trajectory.points.iter().map(|p| p.c_brute).collect();
    let footer = json!({
        "gamma_rate": rate,
        "t_bar": transition.t_bar,
        "kind": transition.kind,
        "window_margin": transition.window_margin,
        "margin_at_t_bar": transition.margin_at_t_bar,
        "max_margin": trajectory.points.iter().map(|p| p.margin).fold(f64::NEG_INFINITY, f64::max),
        "c_brute": brute,
    });
    emit(args.common.out.as_deref(), &body, stdout)?;
    emit_footer(args.common.out.as_deref(), &to_json(&footer), stderr)
}

pub fn cmd_validate(args: &ValidateArgs, stdout: &mut dyn Write) -> Result<(), CliError> {
    let results = run_all(args.states, args.seed, args.inject_fault)?;
    let mut text = String::new();
    for r in &results {
        writeln!(
            text,
            "{:<20} cases={:<6} max_residual={:<20} tol={:<8} {}",
            r.name,
            r.cases,
            fmt_g(r.max_residual),
            fmt_g(r.tolerance),
            if r.passed { "PASS" } else { "FAIL" }
        )
        .expect("write to string");
    }
    stdout.write_all(text.as_bytes())?;
    if let Some(p) = &args.out {
        fs::write(p, to_json(&results))?;
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        return Err(CliError::SuiteFailure(failed));
    }
    Ok(())
}

/// Caps the rayon pool from [`THREADS_ENV`] when set to a positive integer.
pub fn configure_threads() {
    if let Some(n) = std::env::var(THREADS_ENV).ok().and_then(|v| v.parse::<usize>().ok()).filter(|&n| n > 0) {
        // A pool may already exist when embedded; keep it in that case.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

pub fn run(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Analyze(a) => cmd_analyze(a, stdout),
        Command::FilterSweep(a) => cmd_filter_sweep(a, stdout, stderr),
        Command::DampSweep(a) => cmd_damp_sweep(a, stdout, stderr),
        Command::Validate(a) => cmd_validate(a, stdout),
    }
}
