//! `absorbing-flows`: build, verify and simulate state-preserving quantum
//! dynamical semigroups.
//!
//! Exit codes: 0 success, 1 a certificate or check failed, 2 invalid input,
//! 3 schema violation in a model file.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgAction, Parser, Subcommand};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Invalid(String),
    #[error("schema violation: {0}")]
    Schema(String),
    #[error("{0}")]
    Failed(String),
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) | CliError::Io { .. } => 1,
            CliError::Invalid(_) => 2,
            CliError::Schema(_) => 3,
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "absorbing-flows",
    version,
    about = "State-preserving quantum dynamical semigroups"
)]
pub struct Cli {
    /// RNG seed for randomized inputs; falls back to ABSORBING_FLOWS_SEED.
    #[arg(long, global = true, env = "ABSORBING_FLOWS_SEED")]
    seed: Option<u64>,
    /// Override the command's default tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a pure flow with prescribed eigenvalue list and index.
    Build {
        /// Comma-separated eigenvalues of the invariant state.
        #[arg(long)]
        eigenvalues: String,
        #[arg(long)]
        index: usize,
        /// Model JSON destination (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Certify a generator or model JSON file.
    Verify {
        #[arg(long)]
        model: String,
        /// Also write the report as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace-distance trajectory of an initial density.
    Evolve {
        /// Model file, or `preset:depolarizing`.
        #[arg(long)]
        model: String,
        /// maximally-mixed, pure-K, random, omega, an inline JSON matrix or a JSON file.
        #[arg(long, default_value = "maximally-mixed")]
        rho0: String,
        /// Grid end; defaults to 50/ε, or 50 without a gap.
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long, default_value_t = 64)]
        steps: usize,
        /// Logarithmic grid (`--log-grid false` for a linear one).
        #[arg(long, default_value_t = true, action = ArgAction::Set)]
        log_grid: bool,
        /// Eigenvalues for the preset model.
        #[arg(long)]
        eigenvalues: Option<String>,
        /// CSV destination (stdout when omitted).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Spectral-gap estimate on the mean-zero subspace.
    Gap {
        #[arg(long)]
        model: String,
        #[arg(long, default_value_t = absorbing_flows::analysis::DEFAULT_M_MAX)]
        m_max: usize,
        #[arg(long)]
        eigenvalues: Option<String>,
    },
    /// Invariance defect of a non-preserving generator before and after a
    /// commutator perturbation.
    DemoPerturbation {
        /// Defaults to 2/3,1/3.
        #[arg(long)]
        eigenvalues: Option<String>,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
    },
    /// Build and certify every (r, n, list type) up to r_max.
    Sweep {
        #[arg(long, default_value_t = 3)]
        r_max: usize,
        /// Output directory for the per-row models and summary.csv.
        #[arg(long, default_value = "sweep-out")]
        out: PathBuf,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let seed = cli.seed.unwrap_or(absorbing_flows::weyl::DEFAULT_SEED);
    let result = match cli.command {
        Command::Build {
            eigenvalues,
            index,
            out,
        } => commands::build(&eigenvalues, index, seed, cli.tol, out.as_deref()),
        Command::Verify { model, out } => commands::verify(&model, cli.tol, out.as_deref()),
        Command::Evolve {
            model,
            rho0,
            tmax,
            steps,
            log_grid,
            eigenvalues,
            out,
        } => commands::evolve(commands::EvolveArgs {
            model: &model,
            eigenvalues: eigenvalues.as_deref(),
            rho0: &rho0,
            tmax,
            steps,
            log_grid,
            seed,
            tol: cli.tol,
            out: out.as_deref(),
        }),
        Command::Gap {
            model,
            m_max,
            eigenvalues,
        } => commands::gap(&model, eigenvalues.as_deref(), m_max),
        Command::DemoPerturbation {
            eigenvalues,
            epsilon,
        } => commands::demo_perturbation(eigenvalues.as_deref(), epsilon, cli.tol),
        Command::Sweep { r_max, out } => commands::sweep(r_max, cli.tol, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
