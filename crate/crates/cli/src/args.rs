use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use qei_core::ModelFamily;
use serde::{Deserialize, Serialize};

#[derive(Debug, Parser)]
#[command(
    name = "qei",
    version,
    about = "Lowest-eigenvalue experiments for one-particle energy densities"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lowest eigenvalue and eigenvector of the smeared energy density
    Spectrum(CommonArgs),
    /// Lowest eigenvalue of the sinh-Gordon energy density across couplings
    ScanCoupling(CommonArgs),
    /// Lowest eigenvalue across cutoffs at fixed cell width
    ScanCutoff(CommonArgs),
    /// Growth classification, admissible window and negativity witness
    Classify(CommonArgs),
    /// Kernel values on the grid of cell midpoints
    KernelDump(CommonArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Spectrum(_) => "spectrum",
            Command::ScanCoupling(_) => "scan-coupling",
            Command::ScanCutoff(_) => "scan-cutoff",
            Command::Classify(_) => "classify",
            Command::KernelDump(_) => "kernel-dump",
        }
    }

    pub fn args(&self) -> &CommonArgs {
        match self {
            Command::Spectrum(a)
            | Command::ScanCoupling(a)
            | Command::ScanCutoff(a)
            | Command::Classify(a)
            | Command::KernelDump(a) => a,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// Flags shared by every subcommand. Anything given here overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// JSON experiment configuration
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output file; stdout when absent
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Worker threads for assembly and scans
    #[arg(long, value_name = "K")]
    pub threads: Option<usize>,

    /// free, ising or sinh-gordon
    #[arg(long)]
    pub model: Option<ModelFamily>,
    #[arg(long)]
    pub mass: Option<f64>,
    /// Sinh-Gordon coupling B in (0, 2)
    #[arg(long)]
    pub coupling: Option<f64>,
    /// Coefficients c0,c1,... of P(x) = Σ c_k x^k
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    pub poly: Option<Vec<f64>>,
    /// Width parameter of the Gaussian smearing
    #[arg(long)]
    pub sigma: Option<f64>,
    /// Rapidity cutoff R
    #[arg(long, short = 'R')]
    pub cutoff: Option<f64>,
    /// Number of cells N
    #[arg(long, short = 'N')]
    pub cells: Option<usize>,
    /// Gauss-Legendre points per cell and axis
    #[arg(long, short = 'q')]
    pub quad_order: Option<usize>,
    #[arg(long, value_delimiter = ',')]
    pub r_list: Option<Vec<f64>>,
    /// Cell width for cutoff scans (default 2R/N of the grid)
    #[arg(long)]
    pub cell_width: Option<f64>,
    #[arg(long, value_delimiter = ',')]
    pub b_list: Option<Vec<f64>>,
    #[arg(long)]
    pub theta_min: Option<f64>,
    #[arg(long)]
    pub theta_max: Option<f64>,
    #[arg(long)]
    pub margin: Option<f64>,
}
