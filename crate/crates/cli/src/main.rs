//! Command-line front end: reads a JSON model configuration, runs the
//! requested computation, writes CSV/JSON artifacts, and exposes the
//! verification suite through process exit codes.
//!
//! Exit codes: 0 success, 2 verification failure, 3 configuration or model
//! error, 4 I/O error, 5 solver non-convergence.

mod commands;
mod config;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::RunConfig;

#[derive(Parser)]
#[command(
    name = "bcsgap",
    version,
    about = "BCS-Bogoliubov gap equation solver and verification suite"
)]
struct Cli {
    /// Path to the JSON run configuration.
    #[arg(long, global = true, value_name = "PATH", default_value = "config.json")]
    config: PathBuf,

    /// Output directory (overrides the config's output.dir).
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,

    /// Seed override for the randomized conformance checks.
    #[arg(long, global = true, value_name = "N")]
    seed: Option<u64>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the critical constants (z0, tau0..tau2, a, b, gamma, Tc bounds).
    Constants,
    /// Emit the constant-potential curves delta1, delta2 over [0, tau2] as CSV.
    Curve,
    /// Solve the gap surface; writes surface CSV plus metadata JSON.
    Solve,
    /// Emit finite-difference temperature derivatives of the surface as CSV.
    Derivatives,
    /// Run the conformance suite; exit 0 iff every check passes.
    Verify,
}

/// Process failure carrying its exit code.
#[derive(Debug)]
pub enum CliError {
    /// Configuration or model problem (exit 3).
    Config(String),
    /// Filesystem problem (exit 4).
    Io(std::io::Error),
    /// Solver non-convergence (exit 5); partial results are already flushed.
    NonConvergence(String),
    /// One or more conformance checks failed (exit 2).
    Verification(usize),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "configuration error: {msg}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
            CliError::NonConvergence(msg) => write!(f, "solver did not converge: {msg}"),
            CliError::Verification(n) => write!(f, "{n} conformance check(s) failed"),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e)
    }
}

impl From<bcsgap::solver::SolverError> for CliError {
    fn from(e: bcsgap::solver::SolverError) -> Self {
        use bcsgap::constant_gap::CurveError;
        use bcsgap::numerics::NumericsError;
        use bcsgap::solver::SolverError;
        match &e {
            SolverError::NonConvergence { .. } => CliError::NonConvergence(e.to_string()),
            SolverError::Curve(CurveError::Numerics(
                NumericsError::QuadratureNoConvergence { .. }
                | NumericsError::RootNoConvergence { .. },
            )) => CliError::NonConvergence(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<bcsgap::constant_gap::CurveError> for CliError {
    fn from(e: bcsgap::constant_gap::CurveError) -> Self {
        use bcsgap::numerics::NumericsError;
        match &e {
            bcsgap::constant_gap::CurveError::Numerics(
                NumericsError::QuadratureNoConvergence { .. }
                | NumericsError::RootNoConvergence { .. },
            ) => CliError::NonConvergence(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl CliError {
    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Verification(_) => ExitCode::from(2),
            CliError::Config(_) => ExitCode::from(3),
            CliError::Io(_) => ExitCode::from(4),
            CliError::NonConvergence(_) => ExitCode::from(5),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut run_config = RunConfig::load(&cli.config)?;
    if let Some(dir) = cli.out {
        run_config.output.dir = dir;
    }
    if let Some(seed) = cli.seed {
        run_config.solver.seed = seed;
    }
    run_config.validate()?;

    match cli.command {
        Command::Constants => commands::constants(&run_config),
        Command::Curve => commands::curve(&run_config),
        Command::Solve => commands::solve(&run_config),
        Command::Derivatives => commands::derivatives(&run_config),
        Command::Verify => commands::verify(&run_config),
    }
}
