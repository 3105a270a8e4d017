use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hgp_optim_cli::commands;
use hgp_optim_cli::config::{Overrides, RunConfig};
use hgp_optim_cli::CliError;

#[derive(Parser)]
#[command(
    name = "hgp-optim",
    version,
    about = "Build, evaluate and optimize hypergraph product codes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand)]
enum Command {
    /// Print N, K, classical rank and girth of the code
    Build,
    /// Estimate the erasure failure rate as one JSON record
    Eval,
    /// Run plain exploration, simulated annealing or projective simulation
    Optimize,
    /// Estimate the failure rate over a grid of erasure probabilities (CSV)
    Sweep {
        /// Comma-separated grid, overriding `sweep.p_grid`
        #[arg(long, value_delimiter = ',')]
        p_grid: Option<Vec<f64>>,
    },
    /// Write the classical parity-check matrix in alist format
    ExportAlist,
}

#[derive(Args)]
struct Common {
    /// TOML config file, applied on top of the preset
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Named preset, e.g. 625-sa or 2025-ps-hard
    #[arg(long, global = true)]
    preset: Option<String>,
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(..=i64::MAX as u64))]
    seed: Option<u64>,
    /// Worker threads for Monte Carlo trials; results do not depend on it
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Output directory
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Use this alist file as the code
    #[arg(long, global = true)]
    alist: Option<PathBuf>,
    #[arg(long, global = true)]
    erasure_prob: Option<f64>,
    /// Monte Carlo trials per estimate
    #[arg(long, global = true)]
    trials: Option<u64>,
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(threads) = cli.common.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build_global()
            .map_err(|e| CliError::Config(format!("--threads: {e}")))?;
    }
    let p_grid = match &cli.command {
        Command::Sweep { p_grid } => p_grid.clone(),
        _ => None,
    };
    let c = cli.common;
    let cfg = RunConfig::load(&Overrides {
        preset: c.preset,
        config: c.config,
        seed: c.seed,
        out: c.out,
        alist: c.alist,
        erasure_prob: c.erasure_prob,
        trials: c.trials,
        p_grid,
    })?;
    let stdout = io::stdout();
    let mut stdout = stdout.lock();
    match cli.command {
        Command::Build => commands::build(&cfg, &mut stdout),
        Command::Eval => commands::eval(&cfg, &mut stdout),
        Command::Optimize => commands::optimize(&cfg, &mut stdout),
        Command::Sweep { .. } => commands::sweep(&cfg, &mut stdout),
        Command::ExportAlist => commands::export_alist(&cfg, &mut stdout),
    }?;
    stdout.flush().map_err(|source| CliError::Output {
        path: "<stdout>".into(),
        source,
    })
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
