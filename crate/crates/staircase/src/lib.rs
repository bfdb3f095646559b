//! Command-line front end: reads a TOML run configuration, drives the
//! `staircase-core` computations and writes deterministic reports.
//!
//! Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 a check failed.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Config(String),
    Io(String),
    CheckFailed(Vec<String>),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Config(_) => 2,
            Self::Io(_) => 3,
            Self::CheckFailed(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Config(m) => write!(f, "config error: {m}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
            Self::CheckFailed(v) => write!(f, "check failed: {}", v.join("; ")),
        }
    }
}

impl std::error::Error for CliError {}

#[derive(Debug, Parser)]
#[command(name = "staircase", version, about = "Staircase paraproducts and bilinear multiplier experiments")]
pub struct Cli {
    /// Run configuration (TOML).
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory; overrides STAIRCASE_OUT and [output] dir.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overrides the config seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sequences, classification and slope bands of the configured curve.
    Analyze,
    /// Interval collection, disjoint splitting and chained estimate.
    CheckHyp,
    /// Symbol bitmap (PGM) and decomposition identities.
    Symbol,
    /// Applies the configured symbol to two functions given as CSV of (re, im).
    Apply {
        #[arg(long)]
        f: Option<PathBuf>,
        #[arg(long)]
        g: Option<PathBuf>,
    },
    /// Operator-norm probe across resolutions.
    Probe,
    /// Rectangle covers, edge overlaps, partition of unity and model sum.
    Whitney,
}

pub const OUT_ENV: &str = "STAIRCASE_OUT";

/// Runs one subcommand and returns the files written.
pub fn run(cli: &Cli) -> Result<Vec<PathBuf>, CliError> {
    let path = cli.config.as_ref().ok_or_else(|| CliError::Config("--config is required".into()))?;
    let loaded = config::load(path, cli.seed)?;
    let dir = cli
        .out
        .clone()
        .or_else(|| std::env::var_os(OUT_ENV).map(PathBuf::from))
        .or_else(|| loaded.cfg.output.dir.as_ref().map(|d| loaded.resolve(d)))
        .unwrap_or_else(|| PathBuf::from("out"));
    let mut sink = output::Sink::new(dir)?;
    let failures = match &cli.command {
        Command::Analyze => commands::analyze(&loaded, &mut sink)?,
        Command::CheckHyp => commands::check_hyp(&loaded, &mut sink)?,
        Command::Symbol => commands::symbol(&loaded, &mut sink)?,
        Command::Apply { f, g } => commands::apply(&loaded, &mut sink, f.as_deref(), g.as_deref())?,
        Command::Probe => commands::probe(&loaded, &mut sink)?,
        Command::Whitney => commands::whitney(&loaded, &mut sink)?,
    };
    if failures.is_empty() {
        Ok(sink.written().to_vec())
    } else {
        Err(CliError::CheckFailed(failures))
    }
}
