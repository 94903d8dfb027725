//! Command-line driver: steady atlases, Riemann solves, Glimm evolutions,
//! limit-consistency reports, and the acceptance-criteria verifier.
//!
//! Exit codes: 0 success, 2 solver error (or failed verification), 3
//! configuration/CFL error, 64 usage error.

mod commands;
mod config;
mod output;

use bhfluid::Error;
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "bhfluid", version, about = "Isothermal fluid flows on a Schwarzschild background")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct RunArgs {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for CSVs and the manifest.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Steady-state atlas: one CSV profile per configured case.
    Steady {
        #[command(flatten)]
        args: RunArgs,
        /// Worker threads for the case sweep (capped by SOLVER_THREADS).
        #[arg(long)]
        parallel: Option<usize>,
    },
    /// Solve one Riemann problem and emit the fan record and profile.
    Riemann {
        #[command(flatten)]
        args: RunArgs,
    },
    /// Evolve initial data with the random-choice scheme.
    Evolve {
        #[command(flatten)]
        args: RunArgs,
        /// Override the config's van der Corput seed.
        #[arg(long)]
        seq_offset: Option<u64>,
    },
    /// Limit-consistency deviations against the configured base model.
    Limits {
        #[command(flatten)]
        args: RunArgs,
    },
    /// Run acceptance criteria and print one report line per criterion.
    Verify {
        /// "all" or a comma-separated list of criterion ids.
        #[arg(long, default_value = "all")]
        suite: String,
        /// Optional output directory for the CSV report and manifest.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Emit a gnuplot script rendering the CSVs of an existing manifest.
    PlotScript {
        /// Path to a manifest.json produced by another subcommand.
        #[arg(long)]
        manifest: PathBuf,
        /// Path of the gnuplot script to write.
        #[arg(long)]
        out: PathBuf,
    },
}

/// 0 success, 2 solver error, 3 config/CFL error, 64 usage.
fn exit_code_for(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Parameters(_) => 3,
        _ => 2,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    match cli.command {
        Command::Steady { args, parallel } => {
            commands::cmd_steady(&args.config, &args.out, parallel)?;
        }
        Command::Riemann { args } => {
            commands::cmd_riemann(&args.config, &args.out)?;
        }
        Command::Evolve { args, seq_offset } => {
            commands::cmd_evolve(&args.config, &args.out, seq_offset)?;
        }
        Command::Limits { args } => {
            commands::cmd_limits(&args.config, &args.out)?;
        }
        Command::Verify { suite, out } => {
            let Some(ids) = commands::parse_suite(&suite) else {
                eprintln!("unknown suite selector: {suite}");
                return Ok(64);
            };
            let dummy = PathBuf::from("-");
            let all_pass =
                commands::cmd_verify(&ids, out.as_deref().map(|d| (dummy.as_path(), d)))?;
            if !all_pass {
                return Ok(2);
            }
        }
        Command::PlotScript { manifest, out } => {
            commands::cmd_plot_script(&manifest, &out)?;
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version are successful exits; everything else is a
            // usage error.
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code_for(&e))
        }
    }
}
