//! Command-line entry point for the skarc tool.
//!
//! Exit codes: 0 success, 1 domain or I/O error, 2 usage error. Diagnostics
//! go to stderr; data goes to files or stdout only. All commands are
//! deterministic given their arguments, input files, and seed, regardless
//! of the parallelism degree (capped by the SKARC_THREADS variable).

mod commands;
mod tables;

use std::path::PathBuf;

use clap::{Parser, Subcommand};
use skarc_core::sim::Shots;

#[derive(Parser)]
#[command(
    name = "skarc",
    version,
    about = "Discrete gate synthesis and randomized compilation for single-qubit z rotations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

fn shots_value(s: &str) -> Result<Shots, String> {
    s.parse::<Shots>().map_err(|e| e.to_string())
}

#[derive(Subcommand)]
enum Command {
    /// Synthesize one R_Z(theta) into an {H,S,T} word within 2^-bits.
    Synth {
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        bits: u32,
        #[arg(long, default_value_t = 5)]
        max_h: u8,
        #[arg(long, default_value_t = 8)]
        max_depth: u8,
        /// Randomize nearest-neighbor tie-breaks from this seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Generate an ensemble of unique decompositions of one rotation.
    Ensemble {
        #[arg(long)]
        theta: f64,
        #[arg(long)]
        bits: u32,
        /// Number of unique sequences to generate.
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 5)]
        max_h: u8,
        #[arg(long, default_value_t = 8)]
        max_depth: u8,
        #[arg(long)]
        out: PathBuf,
    },
    /// Execute an ensemble under the coherent noise model and tomograph.
    Run {
        /// Ensemble JSON produced by `skarc ensemble`.
        #[arg(long)]
        ensemble: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        delta: f64,
        /// "exact" or a per-basis shot count.
        #[arg(long, value_parser = shots_value, default_value = "exact")]
        shots: Shots,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Sub-ensemble sizes, e.g. "1..20" or "1,5,10,20".
        #[arg(long)]
        m_range: Option<String>,
        #[arg(long, default_value_t = 1000)]
        q_cap: u64,
        #[arg(long)]
        out: PathBuf,
        /// Also emit the CSV tables for this run into a directory.
        #[arg(long)]
        tables_dir: Option<PathBuf>,
    },
    /// Recompute the D(m) sub-ensemble curve from a run report.
    Curve {
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value_t = 0)]
        cell: usize,
        #[arg(long)]
        m_range: String,
        #[arg(long, default_value_t = 1000)]
        q_cap: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Sweep precision and noise settings; write the report and tables.
    ///
    /// Flags override config-file entries, which override the defaults.
    Sweep {
        /// JSON file with any of the sweep parameters.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        theta: Option<f64>,
        /// Comma-separated bits of precision, e.g. "2,3,4,5".
        #[arg(long)]
        b_list: Option<String>,
        /// Comma-separated over-rotation fractions, e.g. "0,0.001,0.005".
        #[arg(long)]
        delta_list: Option<String>,
        #[arg(long)]
        count: Option<usize>,
        #[arg(long, value_parser = shots_value)]
        shots: Option<Shots>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        m_range: Option<String>,
        #[arg(long)]
        q_cap: Option<u64>,
        #[arg(long)]
        max_h: Option<u8>,
        #[arg(long)]
        max_depth: Option<u8>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Noiseless sampling study over a (bits, shots) grid.
    ///
    /// Flags override config-file entries, which override the defaults.
    Contour {
        /// JSON file with any of the contour parameters.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        theta: Option<f64>,
        #[arg(long)]
        b_list: Option<String>,
        /// Comma-separated per-basis sampling budgets.
        #[arg(long)]
        shots_list: Option<String>,
        /// Average the full ensemble instead of the nominal sequence.
        #[arg(long)]
        randomized: bool,
        #[arg(long)]
        count: Option<usize>,
        /// Seeds averaged per grid cell.
        #[arg(long)]
        seeds: Option<u32>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        max_h: Option<u8>,
        #[arg(long)]
        max_depth: Option<u8>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Emit the 2D target-plane projection of a run report cell.
    Project {
        #[arg(long)]
        report: PathBuf,
        #[arg(long, default_value_t = 0)]
        cell: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

fn main() {
    if let Ok(value) = std::env::var("SKARC_THREADS") {
        match value.parse::<usize>() {
            Ok(n) if n >= 1 => {
                let _ = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global();
            }
            _ => {
                eprintln!("skarc: SKARC_THREADS must be a positive integer, got '{value}'");
                std::process::exit(2);
            }
        }
    }

    let cli = Cli::parse();
    match commands::dispatch(cli.command) {
        Ok(()) => {}
        Err(commands::CliError::Usage(msg)) => {
            eprintln!("skarc: {msg}");
            std::process::exit(2);
        }
        Err(commands::CliError::Failure(err)) => {
            eprintln!("skarc: {err}");
            std::process::exit(1);
        }
    }
}
