//! `epcluster`: build 1D non-Hermitian lattice Hamiltonians, compute their
//! spectra and eigenstate fidelities, cluster the states, and export the
//! results as CSV/JSON artifacts.
//!
//! Exit codes: 0 success, 2 configuration or validation problem,
//! 3 numerical failure.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod commands;
mod config;

use config::{parse_grid_flag, GridConfig, RunConfig};

use epcluster::cluster::ClusterError;
use epcluster::dynamics::DynamicsError;
use epcluster::eigen::EigError;
use epcluster::fidelity::FidelityError;
use epcluster::io::OutputError;
use epcluster::lattice::LatticeError;
use epcluster::sweep::SweepError;

#[derive(Debug)]
pub enum CliError {
    /// Bad configuration or invalid request: exit code 2.
    Config(String),
    /// The numerics failed (non-convergence, defective basis, overflow):
    /// exit code 3.
    Numerical(String),
}

impl CliError {
    fn config(message: String) -> Self {
        CliError::Config(message)
    }

    fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Config(_) => ExitCode::from(2),
            CliError::Numerical(_) => ExitCode::from(3),
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Config(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<LatticeError> for CliError {
    fn from(e: LatticeError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<OutputError> for CliError {
    fn from(e: OutputError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<FidelityError> for CliError {
    fn from(e: FidelityError) -> Self {
        CliError::Config(e.to_string())
    }
}

impl From<EigError> for CliError {
    fn from(e: EigError) -> Self {
        match e {
            EigError::BadTolerance(_) => CliError::Config(e.to_string()),
            _ => CliError::Numerical(e.to_string()),
        }
    }
}

impl From<ClusterError> for CliError {
    fn from(e: ClusterError) -> Self {
        match e {
            ClusterError::BadK { k, n } => {
                CliError::Config(format!("k exceeds state count ({k} > {n})"))
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<DynamicsError> for CliError {
    fn from(e: DynamicsError) -> Self {
        match e {
            DynamicsError::SingularBasis { .. } | DynamicsError::Overflow(_) => {
                CliError::Numerical(e.to_string())
            }
            _ => CliError::Config(e.to_string()),
        }
    }
}

impl From<SweepError> for CliError {
    fn from(e: SweepError) -> Self {
        match e {
            SweepError::Solver { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

/// Options shared by every subcommand.
#[derive(Debug, clap::Args)]
pub struct CommonArgs {
    /// Run configuration (JSON).
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory (created if absent).
    #[arg(long)]
    pub out: PathBuf,
    /// Overwrite existing output files.
    #[arg(long)]
    pub force: bool,
    /// Number of clusters (cluster, sweep k-means stage).
    #[arg(long)]
    pub k: Option<usize>,
    /// Pseudo-random seed (cluster, sweep k-means stage).
    #[arg(long)]
    pub seed: Option<u64>,
    /// Reference orthogonality threshold.
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Numerical tolerance (eigensolver deflation; nilpotency test for `ep`).
    #[arg(long)]
    pub tol: Option<f64>,
    /// Grid as START:STOP:STEP (sweep parameter grid, evolve time grid).
    #[arg(long, value_parser = parse_grid_value)]
    pub grid: Option<GridConfig>,
    /// Worker threads for sweeps (default: all cores; env EPCLUSTER_WORKERS).
    #[arg(long)]
    pub workers: Option<usize>,
}

fn parse_grid_value(text: &str) -> Result<GridConfig, String> {
    parse_grid_flag(text).map_err(|e| e.message().to_string())
}

#[derive(Parser)]
#[command(
    name = "epcluster",
    version,
    about = "Spectra, fidelities, and eigenstate clustering for 1D non-Hermitian lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Eigendecomposition: spectrum JSON plus per-state density CSV.
    Spectrum(CommonArgs),
    /// Pairwise fidelity matrix, reference set, and feature vectors.
    Fidelity(CommonArgs),
    /// k-means clustering of the fidelity feature space.
    Cluster(CommonArgs),
    /// Parameter sweep with per-stage CSV output and a JSON manifest.
    Sweep(CommonArgs),
    /// Exceptional-point report (nilpotency index, gap, base state).
    Ep(CommonArgs),
    /// Expand an initial wave packet and evolve it over a time grid.
    Evolve(CommonArgs),
}

fn run(command: &Command) -> Result<(), CliError> {
    let args = match command {
        Command::Spectrum(a)
        | Command::Fidelity(a)
        | Command::Cluster(a)
        | Command::Sweep(a)
        | Command::Ep(a)
        | Command::Evolve(a) => a,
    };
    let config = RunConfig::load(&args.config)?;
    match command {
        Command::Spectrum(_) => commands::cmd_spectrum(args, &config),
        Command::Fidelity(_) => commands::cmd_fidelity(args, &config),
        Command::Cluster(_) => commands::cmd_cluster(args, &config),
        Command::Sweep(_) => commands::cmd_sweep(args, &config),
        Command::Ep(_) => commands::cmd_ep(args, &config),
        Command::Evolve(_) => commands::cmd_evolve(args, &config),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}
