//! `starbody`: reproducible experiments on cosine, p-cosine and Radon transforms of
//! star bodies. Exit codes: 0 success, 1 check failure, 2 configuration error.

mod commands;
mod config;
mod error;
mod output;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{Command, RunArgs, RunConfig};
use error::CliError;

#[derive(Debug, Parser)]
#[command(name = "starbody", version, about)]
struct Cli {
    /// Worker threads; defaults to the number of available cores.
    #[arg(long, global = true, env = "STARBODY_THREADS")]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Sub,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// Closed-form eigenvalue table as CSV.
    Eigvals(RunArgs),
    /// Invariant checks; exits 1 naming the first failure.
    Verify(RunArgs),
    /// Fixed-point iteration of the normalized centroid map from a body.
    Iterate(RunArgs),
    /// Fit of cΓ_pK = I*K with the per-degree transfer table.
    CompareIstar(RunArgs),
    /// First-order response to a zonal perturbation of the ball.
    Perturb(RunArgs),
    /// Linearization residuals of (C^p ρ^α)^β across perturbation sizes.
    Sweep(RunArgs),
}

impl Sub {
    fn split(&self) -> (Command, &RunArgs) {
        match self {
            Sub::Eigvals(a) => (Command::Eigvals, a),
            Sub::Verify(a) => (Command::Verify, a),
            Sub::Iterate(a) => (Command::Iterate, a),
            Sub::CompareIstar(a) => (Command::CompareIstar, a),
            Sub::Perturb(a) => (Command::Perturb, a),
            Sub::Sweep(a) => (Command::Sweep, a),
        }
    }
}

fn configure_threads(threads: Option<usize>) -> Result<(), CliError> {
    let Some(t) = threads else {
        return Ok(());
    };
    if t == 0 {
        return Err(CliError::Config("--threads must be positive".into()));
    }
    rayon::ThreadPoolBuilder::new()
        .num_threads(t)
        .build_global()
        .map_err(|e| CliError::Runtime(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info"))
        .format_timestamp(None)
        .init();
    let cli = Cli::parse();
    let result = configure_threads(cli.threads).and_then(|()| {
        let (command, args) = cli.command.split();
        let config = RunConfig::resolve(command, args)?;
        commands::run(&config)
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            log::error!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
