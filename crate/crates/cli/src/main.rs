mod options;
mod run;
mod suite;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use crate::run::RunArgs;

/// Multi-objective multi-agent path finding.
#[derive(Debug, Parser)]
#[command(name = "momapf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve one instance and write its Pareto front.
    Run(RunArgs),
    /// Run a batch of experiments described by a TOML file.
    Suite {
        /// Suite configuration.
        config: PathBuf,
        /// Summary CSV, one row per experiment, agent count and variant.
        #[arg(long)]
        out: PathBuf,
        /// Per-instance CSV.
        #[arg(long)]
        instances: Option<PathBuf>,
        /// Overrides the worker count from the config.
        #[arg(long)]
        workers: Option<usize>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match dispatch(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> Result<u8> {
    match command {
        Command::Run(args) => Ok(run::execute(&args)?.exit_code()),
        Command::Suite {
            config,
            out,
            instances,
            workers,
        } => {
            let mut config = suite::load_config(&config)?;
            if workers.is_some() {
                config.suite.workers = workers;
            }
            let records = suite::run_suite(&config)?;
            suite::write_summary(&out, &records)?;
            if let Some(path) = instances {
                suite::write_instances(&path, &records)?;
            }
            let ok = records.iter().filter(|r| r.succeeded()).count();
            println!("suite: {ok}/{} instances succeeded", records.len());
            for r in records.iter().filter(|r| r.error.is_some()) {
                eprintln!(
                    "{} n={} {} {} seed {}: {}",
                    r.cell.experiment,
                    r.cell.agents,
                    r.cell.algo,
                    r.cell.lowlevel,
                    r.seed,
                    r.error.as_deref().unwrap_or_default()
                );
            }
            Ok(0)
        }
    }
}
