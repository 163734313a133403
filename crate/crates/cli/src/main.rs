//! `bioplan` command-line front end.

mod commands;
mod manifest;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use crate::commands::Failure;

#[derive(Debug, Parser)]
#[command(
    name = "bioplan",
    version,
    about = "Biomass contract and CHP operation planner"
)]
pub struct Cli {
    /// JSON run manifest; flags override its fields.
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    /// Solver command template with {mps}, {sol}, {gap} and {timelimit}.
    #[arg(long, global = true)]
    pub solver: Option<String>,
    /// Relative MIP gap.
    #[arg(long, global = true)]
    pub gap: Option<f64>,
    /// Per-solve time limit in seconds.
    #[arg(long, global = true)]
    pub time_limit: Option<f64>,
    /// More log output (repeatable).
    #[arg(long, global = true, action = clap::ArgAction::Count)]
    pub verbose: u8,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a municipality config (and optionally an archive directory).
    Validate {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        archive: Option<PathBuf>,
    },
    /// Write the hourly scenario set of one window as CSV.
    GenScenarios {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        archive: Option<PathBuf>,
        /// Realized sample whose weeks before the window feed the forecast.
        #[arg(long)]
        sample: Option<PathBuf>,
        /// P, F1, F2, P+F1 or P+F2.
        #[arg(long)]
        method: Option<String>,
        /// First week of the window, 1-based.
        #[arg(long)]
        week: Option<usize>,
        /// Window length in weeks.
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Solve the yearly contract-selection model and write plan.csv.
    PlanContracts {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        archive: Option<PathBuf>,
        /// Plan on the expected-value scenario instead of the five years.
        #[arg(long)]
        expected_value: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run the receding-horizon year against a realized sample.
    SimulateYear {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        archive: Option<PathBuf>,
        /// Directory with demand.csv, elec_price.csv and fuel_price.csv.
        #[arg(long)]
        sample: Option<PathBuf>,
        /// Existing plan.csv; solved from the archive when absent.
        #[arg(long)]
        plan: Option<PathBuf>,
        #[arg(long)]
        method: Option<String>,
        #[arg(long)]
        horizon_weeks: Option<usize>,
        /// Expected-value baseline for both phases.
        #[arg(long)]
        expected_value: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Tabulate totals of several simulate-year runs.
    Compare {
        /// Run directories holding result.json.
        #[arg(long, num_args = 1..)]
        runs: Vec<PathBuf>,
        /// Method the deltas are measured against.
        #[arg(long)]
        baseline: Option<String>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Write a synthetic five-year archive and one realized sample.
    SynthArchive {
        #[arg(long)]
        weeks: Option<usize>,
        /// Mean hourly demand in MWt.
        #[arg(long)]
        demand_level: Option<f64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let level = match cli.verbose {
        0 => log::LevelFilter::Warn,
        1 => log::LevelFilter::Info,
        _ => log::LevelFilter::Debug,
    };
    env_logger::Builder::new().filter_level(level).init();

    match commands::run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(match f {
                Failure::Usage(_) => 1,
                Failure::Data(_) => 2,
                Failure::Solver(_) => 3,
            })
        }
    }
}
