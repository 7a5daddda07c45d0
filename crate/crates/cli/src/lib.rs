//! `impobs` command-line frontend.
//!
//! Exit codes: 0 observable / found / passed, 1 not observable / none found /
//! failed, 2 invalid input.

pub mod commands;
pub mod format;
pub mod render;

use clap::{Args, Parser, Subcommand};
use impobs_core::criteria::{CriteriaError, Strategy};
use impobs_core::float_rank::TolerancePolicy;
use impobs_core::SystemError;
use std::path::PathBuf;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    System(#[from] SystemError),
    #[error("{0}")]
    Criteria(#[from] CriteriaError),
    #[error("cannot write {0}")]
    Output(String),
}

#[derive(Debug, Parser)]
#[command(
    name = "impobs",
    version,
    about = "Exact impulse-observability analysis of descriptor systems"
)]
pub struct Cli {
    /// Run per-order rank checks and suites on one thread.
    #[arg(long, global = true)]
    pub sequential: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Decide impulse observability with the rank criterion.
    Check(CheckArgs),
    /// Search for an unobservable impulse and its initial state.
    Witness(WitnessArgs),
    /// Solve the frequency-domain equation for an initial state.
    Solve(SolveArgs),
    /// Generate a system from random canonical data.
    Gen(GenArgs),
    /// Run the randomized cross-validation suites.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// System file (JSON with "E", "A", "C").
    pub system: PathBuf,
    /// Accept JSON float literals and convert their decimal text exactly.
    #[arg(long)]
    pub approx: bool,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// first, all or r=K.
    #[arg(long, default_value = "first", value_parser = format::parse_strategy)]
    pub strategy: Strategy,
    /// Report destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also compute floating-point ranks and report disagreements.
    #[arg(long)]
    pub compare_float: bool,
    /// default, abs:TOL or rel:FACTOR.
    #[arg(long, default_value = "default", value_parser = parse_policy)]
    pub float_tol: TolerancePolicy,
}

#[derive(Debug, Args)]
pub struct WitnessArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Largest impulse order searched; defaults to n - 1.
    #[arg(long)]
    pub max_order: Option<usize>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    pub input: InputArgs,
    /// Initial state, e.g. "0,1" or "(1/2, -3)".
    #[arg(long, allow_hyphen_values = true)]
    pub w: String,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub n1: usize,
    #[arg(long)]
    pub n2: usize,
    #[arg(long)]
    pub m: usize,
    #[arg(long, default_value_t = 3)]
    pub bound: i64,
    /// System file destination; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Canonical-data destination; defaults to `<out stem>.canonical.json`
    /// next to `--out`.
    #[arg(long)]
    pub sidecar: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, default_value_t = 200)]
    pub trials: usize,
    #[arg(long, default_value_t = 5)]
    pub max_n: usize,
    #[arg(long, default_value_t = 0x1D5E_0B5E)]
    pub seed: u64,
    /// Where the first counterexample is written on failure.
    #[arg(long, default_value = "selftest-counterexample.json")]
    pub artifact: PathBuf,
    /// Force a failure in the first trial.
    #[arg(long, hide = true)]
    pub inject_failure: bool,
}

pub fn parse_policy(text: &str) -> Result<TolerancePolicy, String> {
    if text == "default" {
        return Ok(TolerancePolicy::Default);
    }
    let (kind, value) = text
        .split_once(':')
        .ok_or_else(|| format!("expected default, abs:TOL or rel:FACTOR, got {text:?}"))?;
    let value: f64 = value
        .parse()
        .ok()
        .filter(|v: &f64| v.is_finite() && *v >= 0.0)
        .ok_or_else(|| format!("invalid tolerance {value:?}"))?;
    match kind {
        "abs" => Ok(TolerancePolicy::Absolute(value)),
        "rel" => Ok(TolerancePolicy::Relative(value)),
        _ => Err(format!("unknown tolerance kind {kind:?}")),
    }
}

/// Runs one command and returns its exit code, printing diagnostics for
/// invalid input to standard error.
pub fn run(cli: Cli) -> u8 {
    let exec = if cli.sequential {
        impobs_core::Execution::Sequential
    } else {
        impobs_core::Execution::default()
    };
    let result = match cli.command {
        Command::Check(a) => commands::check(&a, exec),
        Command::Witness(a) => commands::witness(&a),
        Command::Solve(a) => commands::solve(&a),
        Command::Gen(a) => commands::gen(&a),
        Command::Selftest(a) => commands::selftest(&a, exec),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            2
        }
    }
}
