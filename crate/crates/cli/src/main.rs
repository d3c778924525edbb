//! `scenval`: validate scenario generator output from the command line.

mod commands;
mod error;
mod io;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use scenval_core::ExpectationMode;

use crate::error::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "scenval", version, about = "Nearest neighbor coincidence and memorizing ratio for scenario generators")]
struct Cli {
    /// Worker threads; 0 uses one per core. Output does not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    /// Center at (m - 1) / (2m - 1).
    Exact,
    /// Center at 1/2.
    Asymptotic,
}

impl Mode {
    pub fn expectation(self) -> ExpectationMode {
        match self {
            Mode::Exact => ExpectationMode::ExactExpectation,
            Mode::Asymptotic => ExpectationMode::AsymptoticHalf,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Asymptotic => "asymptotic",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Csv => "csv",
        }
    }
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Output file; standard output when omitted.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Compute nnc and mr for an empirical/generated CSV pair.
    Validate(commands::ValidateArgs),
    /// Mean memorizing ratio over densities, rho and sample sizes.
    Table1(commands::Table1Args),
    /// Mean nnc of two same-law samples at increasing sample sizes.
    NncConvergence(commands::NncArgs),
    /// Trajectory of both statistics along a schedule of toy generators.
    Harness(commands::HarnessArgs),
    /// Compare the closed-form Q(s) with direct quadrature.
    QCheck(commands::QCheckArgs),
    /// Write a seeded sample from one of the reference densities as CSV.
    Sample(commands::SampleArgs),
}

fn run(cli: Cli) -> CliResult<()> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {} threads: {e}", cli.threads)))?;
    }
    match cli.command {
        Command::Validate(a) => commands::validate(a),
        Command::Table1(a) => commands::table1(a),
        Command::NncConvergence(a) => commands::nnc_convergence(a),
        Command::Harness(a) => commands::harness(a),
        Command::QCheck(a) => commands::q_check(a),
        Command::Sample(a) => commands::sample(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
