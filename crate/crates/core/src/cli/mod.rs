//! Command-line front end.
//!
//! Every command writes its report to the supplied writer so that the
//! binary and the tests share one code path. Exit codes: 0 success, 1 I/O
//! or parse failure, 2 validation or capacity failure.

mod commands;
pub mod config;
pub mod format;

pub use commands::{sweep_csv, SWEEP_HEADER, TRACE_HEADER};

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::Error;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TRIALS: usize = 10_000;

#[derive(Debug, Parser)]
#[command(name = "fermion-ergotropy", version, about = "Ergotropy and passivity of free-fermion states")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a covariance-matrix file: physicality, purity, canonical values.
    Validate {
        path: PathBuf,
        /// Purity tolerance on ‖ΓΓᵀ − 𝟙‖.
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Lower the energy of a covariance matrix with Gaussian operations.
    Minimize {
        path: PathBuf,
        /// Write the stage-by-stage trace as CSV.
        #[arg(long)]
        trace: Option<PathBuf>,
    },
    /// Ergotropy of a covariance-matrix file or a thermal product.
    Ergotropy(ErgotropyArgs),
    /// Passivity, inversion witness and copy count for a thermal product.
    Activate(ActivateArgs),
    /// Two-mode thermal grid sweep written as CSV.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; standard output when absent.
        #[arg(long, short)]
        output: Option<PathBuf>,
        /// Passivity tolerance, overriding the config file.
        #[arg(long)]
        tol: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Gaussian,
    Fock,
    Sampler,
}

/// Frequencies: a per-mode list or one common value.
#[derive(Debug, Args)]
pub struct FrequencyArgs {
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, conflicts_with = "omega")]
    pub omegas: Option<Vec<f64>>,
    #[arg(long)]
    pub omega: Option<f64>,
}

#[derive(Debug, Args)]
pub struct ErgotropyArgs {
    /// Covariance-matrix file; alternatively give --betas with frequencies.
    #[arg(conflicts_with = "betas")]
    pub path: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    pub betas: Option<Vec<f64>>,
    #[command(flatten)]
    pub freq: FrequencyArgs,
    #[arg(long, value_delimiter = ',', default_value = "gaussian")]
    pub method: Vec<Method>,
    #[arg(long, default_value_t = DEFAULT_TRIALS)]
    pub trials: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Debug, Args)]
pub struct ActivateArgs {
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true, required = true)]
    pub betas: Vec<f64>,
    #[command(flatten)]
    pub freq: FrequencyArgs,
    #[arg(long, default_value_t = 1)]
    pub max_copies: usize,
}

/// A failed command with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        Self {
            code: 1,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        Self::invalid(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::input(e.to_string())
    }
}

pub type CliResult = Result<(), CliError>;

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Validate { path, tol } => commands::validate(&path, tol, out),
        Command::Minimize { path, trace } => commands::minimize(&path, trace.as_deref(), out),
        Command::Ergotropy(args) => commands::ergotropy(&args, out),
        Command::Activate(args) => commands::activate(&args, out),
        Command::Sweep { config, output, tol } => commands::sweep(&config, output.as_deref(), tol, out),
    }
}
