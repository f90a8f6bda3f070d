//! `ssd` command-line front end.
//!
//! Exit codes: 0 success, 1 input or validation error, 2 monotonicity
//! failure, 3 verification residual above tolerance, 4 numerical failure.

pub mod chainfile;
mod commands;

use std::ffi::OsString;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use ssd_core::Error as CoreError;
use thiserror::Error;

pub use chainfile::{load_chain, load_dual, save_chain, save_dual, ChainFile, Meta};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_MONOTONICITY: i32 = 2;
pub const EXIT_RESIDUAL: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}:{line}:{column}: {message}")]
    Parse {
        path: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{path}: unsupported file version {found} (expected {expected})")]
    SchemaVersionMismatch {
        path: String,
        found: u32,
        expected: u32,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    /// A check ran and its result did not pass; the report is already written.
    #[error("{message}")]
    Failed { code: i32, message: String },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. }
            | CliError::SchemaVersionMismatch { .. }
            | CliError::Io { .. }
            | CliError::Usage(_) => EXIT_INPUT,
            CliError::Failed { code, .. } => *code,
            CliError::Core(e) => match e {
                CoreError::MonotonicityViolated { .. } => EXIT_MONOTONICITY,
                CoreError::SingularSystem(_) | CoreError::MaxStepsExceeded { .. } => EXIT_NUMERICAL,
                _ => EXIT_INPUT,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "ssd",
    version,
    about = "Strong stationary duals of Möbius monotone chains"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Example chains.
    #[command(subcommand)]
    Model(ModelCommand),
    /// Möbius monotonicity of the time-reversed kernel and of nu/pi.
    Check {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long, default_value = "down")]
        direction: DirectionArg,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Build the strong stationary dual.
    Dual {
        #[arg(long)]
        chain: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Intertwining residuals and separation vs. absorption survival.
    Verify {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        dual: PathBuf,
        #[arg(long, default_value_t = 60)]
        horizon: usize,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Eigenvalues with multiplicities.
    Eigen {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        dual: Option<PathBuf>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Separation, total variation and dual survival curves as CSV.
    Separation {
        #[arg(long)]
        chain: PathBuf,
        #[arg(long)]
        dual: Option<PathBuf>,
        #[arg(long, default_value_t = 60)]
        horizon: usize,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Exact absorption-time law of a dual.
    Absorb {
        #[command(flatten)]
        source: DualSource,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
    /// Closed-form mixing bounds.
    Bounds {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(long)]
        c: f64,
        /// Also report the exact separation of this chain at the bound's step.
        #[arg(long)]
        chain: Option<PathBuf>,
    },
    /// Monte Carlo absorption times of a dual.
    Simulate {
        #[command(flatten)]
        source: DualSource,
        #[arg(long, default_value_t = 100_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum ModelCommand {
    /// Write a model chain file.
    Gen {
        #[command(flatten)]
        model: ModelArgs,
        #[arg(short = 'o', long = "output")]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct DualSource {
    /// Dual chain file.
    #[arg(long)]
    pub dual: Option<PathBuf>,
    /// Primal chain file; its dual is built on the fly.
    #[arg(long)]
    pub chain: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModelType {
    IsingCircle,
    IsingGraph,
    Lattice,
    Cube,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Down,
    Up,
}

#[derive(Debug, Args)]
pub struct ModelArgs {
    #[arg(long = "type", value_enum)]
    pub model_type: ModelType,
    /// Ising vertex count or lattice side.
    #[arg(long = "N")]
    pub big_n: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub beta: f64,
    #[arg(long)]
    pub lambda1: Option<f64>,
    #[arg(long)]
    pub mu1: Option<f64>,
    #[arg(long)]
    pub lambda2: Option<f64>,
    #[arg(long)]
    pub mu2: Option<f64>,
    /// Cube dimension.
    #[arg(long)]
    pub n: Option<usize>,
    /// Cube alphabet size minus one.
    #[arg(long)]
    pub k: Option<usize>,
    /// Edge list for ising-graph, one `a b` pair per line.
    #[arg(long)]
    pub edges: Option<PathBuf>,
}

/// Parses `argv` (including the program name), runs the command and returns
/// the process exit code. Errors are written to stderr.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match commands::execute(cli.command) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
