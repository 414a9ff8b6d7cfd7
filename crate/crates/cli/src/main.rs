use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

mod commands;
mod config;
mod io;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad arguments, unreadable or malformed input: exit 2.
    #[error("{0}")]
    Input(String),
    /// A check or assumption failed: exit 1.
    #[error("{0}")]
    Failed(String),
}

#[derive(Parser, Debug)]
#[command(name = "membrane", version, about = "Blow-up lab for the radial relativistic membrane in (u, v) variables")]
pub struct Cli {
    /// Output directory (MEMBRANE_OUT takes precedence when set).
    #[arg(long, global = true, default_value = "run")]
    out: PathBuf,
    /// Suppress the summary on stdout.
    #[arg(long, global = true)]
    quiet: bool,
    /// Worker threads for parallel sections (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check assumptions A1-A3 for the configured datum and print margins.
    Validate { config: PathBuf },
    /// Run the solver and write the run directory.
    Solve { config: PathBuf },
    /// Trace extra characteristic curves through a run directory's snapshots.
    Trace {
        run_dir: PathBuf,
        /// plus, minus or zero.
        #[arg(long, default_value = "zero")]
        family: String,
        /// Foot points at t = 0, comma separated.
        #[arg(long, value_delimiter = ',', required = true)]
        feet: Vec<f64>,
    },
    /// Run the property suite on a run directory, optionally against a refined run.
    Verify {
        run_dir: PathBuf,
        refined: Option<PathBuf>,
        /// Verification settings from the [verify] section of this file.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Every node and every snapshot instead of the default subsample.
        #[arg(long)]
        full: bool,
    },
    /// Parameter sweep over drop, width and v0 of the built-in family.
    Sweep { config: PathBuf },
    /// Summarize a run directory.
    Report { run_dir: PathBuf },
}

pub struct Ctx {
    pub out: PathBuf,
    pub quiet: bool,
}

impl Ctx {
    pub fn say(&self, text: &str) {
        if !self.quiet {
            print!("{text}");
            if !text.ends_with('\n') {
                println!();
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: --threads: {e}");
            return ExitCode::from(2);
        }
    }
    let out = std::env::var_os("MEMBRANE_OUT").map(PathBuf::from).unwrap_or(cli.out);
    let ctx = Ctx { out, quiet: cli.quiet };
    let res = match cli.cmd {
        Command::Validate { config } => commands::validate(&ctx, &config),
        Command::Solve { config } => commands::solve(&ctx, &config),
        Command::Trace { run_dir, family, feet } => commands::trace(&ctx, &run_dir, &family, &feet),
        Command::Verify { run_dir, refined, config, full } => commands::verify(&ctx, &run_dir, refined.as_deref(), config.as_deref(), full),
        Command::Sweep { config } => commands::sweep(&ctx, &config),
        Command::Report { run_dir } => commands::report(&ctx, &run_dir),
    };
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Failed(m)) => {
            eprintln!("fail: {m}");
            ExitCode::from(1)
        }
        Err(CliError::Input(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(2)
        }
    }
}
