//! Command-line front end: classical and quantum simulation, stationary-state
//! and partial-transpose analysis, entanglement sweeps, and the full claim
//! checklist.

mod commands;
mod config;
mod output;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use config::Format;

#[derive(Debug, Parser)]
#[command(name = "sync-entangle", version, about, arg_required_else_help = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate the classical synchronization flow.
    ClassicalSim(SimArgs),
    /// Evolve a two-qubit density matrix under the master equation.
    QuantumEvolve(SimArgs),
    /// Print a stationary density matrix and its spectrum.
    Stationary(ParamArgs),
    /// Partial-transpose spectrum and separability verdict of a stationary state.
    Ppt(ParamArgs),
    /// Separability over a grid of stationary states.
    Sweep(SweepArgs),
    /// Run every claim check and print PASS/FAIL per item.
    Verify(Shared),
}

#[derive(Debug, Args)]
pub struct Shared {
    /// Output file; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// JSON file with default values; flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    /// classical-sim: `lx,ly,lz`; quantum-evolve: `mixed`, `basis:ij` or a JSON density matrix file.
    #[arg(long, allow_hyphen_values = true)]
    init: Option<String>,
    #[arg(long)]
    t_final: Option<f64>,
    #[arg(long)]
    dt: Option<f64>,
    /// Write every n-th step.
    #[arg(long)]
    stride: Option<usize>,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Debug, Args)]
pub struct ParamArgs {
    #[arg(long)]
    a: Option<f64>,
    /// Real part of the coherence c.
    #[arg(long, allow_hyphen_values = true)]
    c: Option<f64>,
    /// Imaginary part of the coherence c.
    #[arg(long, allow_hyphen_values = true)]
    c_im: Option<f64>,
    #[command(flatten)]
    shared: Shared,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Grid points per axis.
    #[arg(long)]
    grid: Option<usize>,
    #[command(flatten)]
    shared: Shared,
}

/// Failure classes, each with its own exit status.
#[derive(Debug)]
pub enum Failure {
    /// Invalid arguments or parameters (exit 2).
    Usage(String),
    /// Divergence guard or positivity loss (exit 3).
    Numerical(String),
    /// I/O or serialization failure (exit 1).
    Io(String),
}

impl Failure {
    pub fn io(e: impl fmt::Display) -> Self {
        Self::Io(e.to_string())
    }

    fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Numerical(_) => 3,
            Self::Io(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Usage(m) => write!(f, "invalid arguments: {m}"),
            Self::Numerical(m) => write!(f, "numerical failure: {m}"),
            Self::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::ClassicalSim(args) => commands::classical_sim(args),
        Command::QuantumEvolve(args) => commands::quantum_evolve(args),
        Command::Stationary(args) => commands::stationary(args),
        Command::Ppt(args) => commands::ppt(args),
        Command::Sweep(args) => commands::sweep(args),
        Command::Verify(args) => commands::verify(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
