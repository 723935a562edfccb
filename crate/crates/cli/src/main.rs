//! `epl`: experiments on elliptical potentials with matrix powers.
//!
//! Exit codes: 0 success, 1 a mathematical property was violated, 2 usage,
//! configuration or I/O error.

mod commands;
mod config;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{ExperimentConfig, Overrides};

#[derive(Parser, Debug)]
#[command(name = "epl", version, about = "Elliptical potential sums, bounds and bandit runs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    flags: Overrides,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Run the randomized inequality suite and print a JSON report
    Verify,
    /// Tabulate the closed-form upper bound for each --power
    Bounds,
    /// Run a sequence through the design matrix and write per-step CSV
    Simulate,
    /// Run a LinUCB-style episode and write the trajectory CSV
    Bandit,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    Violation(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            Self::Violation(_) => 1,
            Self::Usage(_) | Self::Io(_) => 2,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = ExperimentConfig::resolve(&cli.flags).and_then(|cfg| match cli.command {
        Command::Verify => commands::cmd_verify(&cfg),
        Command::Bounds => commands::cmd_bounds(&cfg),
        Command::Simulate => commands::cmd_simulate(&cfg),
        Command::Bandit => commands::cmd_bandit(&cfg),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (kind, msg) = match &e {
                CliError::Usage(m) => ("error", m),
                CliError::Io(m) => ("io error", m),
                CliError::Violation(m) => ("violation", m),
            };
            eprintln!("epl: {kind}: {msg}");
            ExitCode::from(e.exit_code())
        }
    }
}
