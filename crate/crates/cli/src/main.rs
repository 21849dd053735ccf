//! `ictal` — EEG seizure-detection pipeline front end.
//!
//! Subcommands:
//!
//! * `extract`   — corpus (or synthetic surrogate) → five feature CSVs
//! * `evaluate`  — repeated stratified 10-fold cross-validation over the
//!   four one-vs-E cases, JSON reports plus summary tables
//! * `plot`      — six-panel SVG of one segment and its sub-band
//!   reconstructions
//! * `decompose` — per-band wavelet coefficient CSVs for one segment
//!
//! Exit codes: 0 success, 1 usage or configuration error, 2 data error,
//! 3 numerical failure.

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use ictal_core::ingest::SetId;

mod commands;
mod config;
mod corpus;
mod error;
mod svg;
mod table;

use config::{CommonArgs, EvaluateArgs};
use error::CliError;

#[derive(Parser)]
#[command(
    name = "ictal",
    version,
    about = "EEG seizure detection: Butterworth prefilter, 4-level db4 wavelet features, SVM/k-NN/naive-Bayes under repeated stratified cross-validation"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract the 50-feature vectors of all five sets into CSV files
    Extract {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Cross-validate classifiers on the one-vs-E cases and write reports
    Evaluate {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        eval: EvaluateArgs,
    },
    /// Render one segment and its five sub-band reconstructions as SVG
    Plot {
        #[command(flatten)]
        common: CommonArgs,
        /// Which set (A..E)
        #[arg(long)]
        set: SetId,
        /// Segment index within the set (1..=100)
        #[arg(long)]
        segment: u32,
    },
    /// Write per-band wavelet coefficients of one segment as CSV
    Decompose {
        #[command(flatten)]
        common: CommonArgs,
        /// Which set (A..E)
        #[arg(long)]
        set: SetId,
        /// Segment index within the set (1..=100)
        #[arg(long)]
        segment: u32,
        /// Also write the band-reconstruction plot
        #[arg(long)]
        plot: bool,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Extract { common } => {
            let cfg = config::resolve(&common, &EvaluateArgs::default())?;
            commands::extract(&cfg)
        }
        Command::Evaluate { common, eval } => {
            let cfg = config::resolve(&common, &eval)?;
            commands::evaluate(&cfg)
        }
        Command::Plot { common, set, segment } => {
            let cfg = config::resolve(&common, &EvaluateArgs::default())?;
            commands::plot(&cfg, set, segment).map(|_| ())
        }
        Command::Decompose {
            common,
            set,
            segment,
            plot,
        } => {
            let cfg = config::resolve(&common, &EvaluateArgs::default())?;
            commands::decompose_cmd(&cfg, set, segment, plot)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
