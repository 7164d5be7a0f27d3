//! `packcell <validate|cells|density|random|entropy|prove>`
//!
//! Exit codes: 0 success, 1 a checked property failed, 2 malformed input.

mod commands;
mod input;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use input::WindowArg;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Input(_) | CliError::Io(_) => 2,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "packcell", version, about = "Cells, densities and entropy estimators for disc packings")]
pub struct Cli {
    /// Seed for every random draw; recorded in each report.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check the 2x-inflation condition; exit 1 if any pair violates it.
    Validate {
        packing: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Cells, areas and coverage ratios of every disc.
    Cells {
        packing: PathBuf,
        /// `rect:xmin,ymin,xmax,ymax` or `disc:cx,cy,r`; defaults to the
        /// file's window, then to a box around the discs.
        #[arg(long)]
        window: Option<WindowArg>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Densities over concentric windows scaled by (s+1)/k, s = 0..k.
    Density {
        packing: PathBuf,
        #[arg(long)]
        window: Option<WindowArg>,
        #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u32).range(1..))]
        shrink: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Random critical packing of n discs.
    Random {
        #[arg(long, value_parser = clap::value_parser!(u64).range(2..))]
        n: u64,
        #[arg(long, default_value = "rect:0,0,10,10")]
        window: WindowArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Entropy estimators against the exact entropy.
    Entropy {
        /// CSV with header `x,y`.
        #[arg(long, conflicts_with = "generate", required_unless_present = "generate")]
        points: Option<PathBuf>,
        #[arg(long)]
        generate: Option<GenerateMode>,
        /// Domain; must be a rectangle when generating.
        #[arg(long, default_value = "rect:0,0,1,1")]
        domain: WindowArg,
        /// Comma-separated increasing sizes.
        #[arg(long, default_value = "100,400,1600,6400")]
        schedule: String,
        /// Relative density levels of equal-width vertical strips.
        #[arg(long)]
        levels: Option<String>,
        /// CSV table: N,estimator,partition_entropy,exact_entropy,gap.
        #[arg(long)]
        out: Option<PathBuf>,
        /// JSON report (default: stdout).
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Numeric sweeps of the inequalities behind the coverage bound.
    Prove {
        #[arg(long, value_enum, default_value = "all")]
        check: ProveCheck,
        #[arg(long, default_value_t = packcell::proof_checks::DEFAULT_GRID)]
        grid: usize,
        #[arg(long, default_value_t = 10_000)]
        trials: usize,
        /// Sweep g outside x ≤ π/6 ≤ α; informational, never fails.
        #[arg(long)]
        outside_regime: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenerateMode {
    Iid,
    Hexagonal,
    SquareGrid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ProveCheck {
    All,
    G,
    Claim1,
    Alpha,
    Cos2,
    Oa2,
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("PACKCELL_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| CliError::Input(format!("PACKCELL_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Input(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let echo: Vec<String> = std::iter::once("packcell".to_string()).chain(std::env::args().skip(1)).collect();
    let result = configure_threads().and_then(|()| commands::run(&cli, echo));
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("packcell: {e}");
            ExitCode::from(e.code())
        }
    }
}
