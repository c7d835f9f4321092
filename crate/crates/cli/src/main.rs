//! Command-line front end for the elastic-tube library: geometry export,
//! induced-potential spectra, residual gates, closed-tube quantization, and
//! modulus sweeps.
//!
//! Exit codes: 0 success, 1 check failure (residual breach, infeasible
//! quantization), 2 invalid input.

// Guards written as !(x > 0.0) also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

mod commands;
mod config;
mod output;

use commands::sweep::SweepMode;
use config::RunConfig;

#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    /// Bad configuration, arguments, or environment (exit 2).
    Invalid(String),
    /// A verification gate did not pass (exit 1).
    CheckFailed(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Self::Invalid(msg) => write!(f, "invalid input: {msg}"),
            Self::CheckFailed(msg) => write!(f, "check failed: {msg}"),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "conformon",
    version,
    about = "Elastic-tube conformations and the quantum potentials they induce"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum FormatArg {
    Csv,
    Ply,
    Both,
}

#[derive(Args)]
struct CommonArgs {
    /// JSON configuration document; flags override its keys
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_dir`)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Geometry formats to write (overrides `formats`)
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
    /// Arclength step (overrides `step`)
    #[arg(long)]
    step: Option<f64>,
    /// Eigensolver grid size (overrides `n_grid`)
    #[arg(long = "grid")]
    grid: Option<usize>,
    /// Elliptic modulus (overrides `kappa`)
    #[arg(long)]
    kappa: Option<f64>,
    /// Scaled tension constant (overrides `C2`)
    #[arg(long)]
    c2: Option<f64>,
    /// Constant torsion (overrides `tau0`)
    #[arg(long)]
    tau0: Option<f64>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the tube axis from the curvature profile and export it
    Conformation(CommonArgs),
    /// Solve the induced Schrödinger problem over one curvature period
    Spectrum(CommonArgs),
    /// Scan exact-solution residuals and gate on tolerances
    Residuals(CommonArgs),
    /// Find the modulus at which a closed tube fits m curvature periods
    Quantize {
        #[command(flatten)]
        common: CommonArgs,
        /// Tube length
        #[arg(long)]
        length: f64,
        /// Number of curvature periods around the tube
        #[arg(long, default_value_t = 1)]
        windings: u32,
    },
    /// Run a subcommand across a list of moduli, one worker per modulus
    Sweep {
        #[command(flatten)]
        common: CommonArgs,
        /// Comma-separated moduli
        #[arg(long, value_delimiter = ',', default_value = "0,0.25,0.75,0.995,1")]
        kappas: Vec<f64>,
        #[arg(long, value_enum, default_value_t = SweepMode::Conformation)]
        mode: SweepMode,
    },
}

fn merged_config(common: &CommonArgs) -> Result<RunConfig, CliError> {
    let mut config = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &common.out {
        config.output_dir = Some(out.clone());
    }
    if let Some(format) = common.format {
        config.formats = Some(match format {
            FormatArg::Csv => vec!["csv".into()],
            FormatArg::Ply => vec!["ply".into()],
            FormatArg::Both => vec!["csv".into(), "ply".into()],
        });
    }
    if let Some(step) = common.step {
        config.step = Some(step);
    }
    if let Some(grid) = common.grid {
        config.n_grid = Some(grid);
    }
    if let Some(kappa) = common.kappa {
        config.kappa = Some(kappa);
    }
    if let Some(c2) = common.c2 {
        config.c2 = Some(c2);
    }
    if let Some(tau0) = common.tau0 {
        config.tau0 = Some(tau0);
    }
    Ok(config)
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Conformation(common) => {
            let resolved = config::resolve(&merged_config(&common)?)?;
            commands::conformation::run(&resolved).map(|_| ())
        }
        Command::Spectrum(common) => {
            let resolved = config::resolve(&merged_config(&common)?)?;
            commands::spectrum::run(&resolved).map(|_| ())
        }
        Command::Residuals(common) => {
            let resolved = config::resolve(&merged_config(&common)?)?;
            commands::residuals::run(&resolved).map(|_| ())
        }
        Command::Quantize {
            common,
            length,
            windings,
        } => {
            let mut config = merged_config(&common)?;
            // The root does not depend on the modulus; keep resolve happy.
            config.kappa.get_or_insert(0.0);
            let resolved = config::resolve(&config)?;
            commands::quantize::run(&resolved, length, windings).map(|_| ())
        }
        Command::Sweep {
            common,
            kappas,
            mode,
        } => commands::sweep::run(&merged_config(&common)?, &kappas, mode),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e @ CliError::CheckFailed(_)) => {
            eprintln!("{e}");
            ExitCode::from(1)
        }
        Err(e @ CliError::Invalid(_)) => {
            eprintln!("{e}");
            ExitCode::from(2)
        }
    }
}
