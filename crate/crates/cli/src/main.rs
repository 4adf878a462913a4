use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};

use rds_cli::commands::{check_report, load, simulate_csv, skew_report, SimulateOptions};
use rds_cli::{gallery, render};
use rds_ergodic::ergodic::{DEFAULT_HORIZONS, DEFAULT_TRIALS};

#[derive(Parser)]
#[command(version, about = "Irreducibility and skew-product ergodicity for finite Markov-driven systems")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Kernel diagnostics: invariance, irreducibility, strict irreducibility.
    Check { file: PathBuf },
    /// Skew-product ergodicity, closed classes and counterexamples.
    Skew { file: PathBuf },
    /// Birkhoff and Cesaro convergence trace as CSV.
    Simulate {
        file: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Comma-separated, strictly increasing.
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_HORIZONS)]
        horizons: Vec<usize>,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
        /// Config function name, or ind:<point>.
        #[arg(long)]
        f: Option<String>,
        /// Start point label.
        #[arg(long)]
        x: Option<String>,
        /// `stationary` or a state label for the first Markov state.
        #[arg(long)]
        start: Option<String>,
        /// Worker threads; output does not depend on it.
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Print or save a built-in system.
    Gallery {
        name: String,
        #[arg(long)]
        emit: Option<PathBuf>,
    },
}

fn write_or_print(text: &str, path: Option<&PathBuf>) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Check { file } => print!("{}", check_report(&load(&file)?)?),
        Command::Skew { file } => print!("{}", skew_report(&load(&file)?)?),
        Command::Simulate { file, seed, horizons, trials, f, x, start, workers, out } => {
            let config = load(&file)?;
            let opts = SimulateOptions { seed, horizons, trials, f, x, start };
            let csv = match workers {
                Some(n) => rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build()
                    .context("starting worker pool")?
                    .install(|| simulate_csv(&config, &opts))?,
                None => simulate_csv(&config, &opts)?,
            };
            write_or_print(&csv, out.as_ref())?;
        }
        Command::Gallery { name, emit } => write_or_print(&render(&gallery(&name)?), emit.as_ref())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
