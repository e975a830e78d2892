//! `mdhp` — dataset generation, MDHP estimation, distribution reports,
//! classifier training and evaluation as one reproducible pipeline.
//!
//! Subcommands: `gen | estimate | report-cdf | train | eval`. Every command
//! accepts `--config` (JSON) plus flag overrides; flags win. All randomness
//! flows from the master seed through named stream derivation, so a fixed
//! seed reproduces every artifact byte-for-byte (wall-clock fields aside).
//!
//! Exit codes: 0 success, 2 configuration/input errors, 3 I/O errors,
//! 4 numeric failures.

mod commands;
pub mod stats;
mod config;
mod error;

pub use config::PipelineConfig;
pub use error::{CliError, ExitCode};

use clap::{Parser, Subcommand};
use std::path::PathBuf;

#[derive(Debug, Parser)]
#[command(name = "mdhp", version, about = "Hawkes-process traffic analysis pipeline")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate the labeled window dataset.
    Gen {
        /// Output directory for dataset.jsonl and manifest.json.
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Master seed (overrides config).
        #[arg(long)]
        seed: Option<u64>,
        /// Windows per scenario row.
        #[arg(long)]
        count: Option<usize>,
        /// ECU count.
        #[arg(long)]
        dims: Option<usize>,
        /// Restrict generation to one scenario row (0..=8).
        #[arg(long)]
        scenario: Option<u8>,
    },
    /// Estimate MDHP parameters for every window of a dataset.
    Estimate {
        /// Dataset directory (or dataset.jsonl path).
        #[arg(long)]
        data: PathBuf,
        /// Parameter-dump output path (JSON lines).
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Worker threads for the batch.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        dims: Option<usize>,
        /// Optional JSON copy of the speed report.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Empirical CDFs of estimated parameters split by label.
    ReportCdf {
        /// Parameter dump from `estimate`.
        #[arg(long)]
        dump: PathBuf,
        /// Excitation pair "i,j".
        #[arg(long, value_parser = parse_dim_pair)]
        dim_pair: (usize, usize),
        #[arg(long)]
        out: PathBuf,
    },
    /// Train the window classifier.
    Train {
        #[arg(long)]
        data: PathBuf,
        /// Parameter dump aligned with the dataset.
        #[arg(long)]
        dump: PathBuf,
        /// Checkpoint output path.
        #[arg(long)]
        checkpoint: PathBuf,
        /// Per-epoch metric trace (CSV).
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long)]
        config: Option<PathBuf>,
        /// Seed base (the effective seed is seed + rank).
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        epochs: Option<usize>,
    },
    /// Evaluate a trained checkpoint.
    Eval {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        dump: PathBuf,
        #[arg(long)]
        checkpoint: PathBuf,
        /// Metrics report output (JSON).
        #[arg(long)]
        out: PathBuf,
        /// Which split to evaluate: train | val | all.
        #[arg(long, default_value = "val")]
        split: String,
    },
}

fn parse_dim_pair(s: &str) -> Result<(usize, usize), String> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 2 {
        return Err("expected \"i,j\"".into());
    }
    let i = parts[0].trim().parse().map_err(|e| format!("{e}"))?;
    let j = parts[1].trim().parse().map_err(|e| format!("{e}"))?;
    Ok((i, j))
}

/// Parses arguments from the process environment and runs; returns the
/// process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code() as i32
        }
    }
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Gen {
            out,
            config,
            seed,
            count,
            dims,
            scenario,
        } => commands::gen::run(&out, config.as_deref(), seed, count, dims, scenario),
        Command::Estimate {
            data,
            out,
            config,
            workers,
            dims,
            report,
        } => commands::estimate::run(
            &data,
            &out,
            config.as_deref(),
            workers,
            dims,
            report.as_deref(),
        ),
        Command::ReportCdf { dump, dim_pair, out } => {
            commands::report_cdf::run(&dump, dim_pair, &out)
        }
        Command::Train {
            data,
            dump,
            checkpoint,
            trace,
            config,
            seed,
            epochs,
        } => commands::train::run(
            &data,
            &dump,
            &checkpoint,
            trace.as_deref(),
            config.as_deref(),
            seed,
            epochs,
        ),
        Command::Eval {
            data,
            dump,
            checkpoint,
            out,
            split,
        } => commands::eval::run(&data, &dump, &checkpoint, &out, &split),
    }
}
