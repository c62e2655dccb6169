mod settings;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use ness_core::{run_point, run_sweep, sweep::write_rows, SweepRow};

use settings::Settings;

/// Steady-state entanglement of a three-qubit XX chain between two thermal baths.
#[derive(Parser)]
#[command(name = "ness", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a single parameter point
    Point(Invocation),
    /// Solve every point of a 1-D or 2-D grid
    Sweep(Invocation),
}

#[derive(clap::Args)]
struct Invocation {
    /// File of `key = value` lines; flags take precedence
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    #[command(flatten)]
    settings: Settings,
}

fn run(cli: Cli) -> Result<()> {
    let (inv, point) = match cli.command {
        Command::Point(inv) => (inv, true),
        Command::Sweep(inv) => (inv, false),
    };
    let base = match &inv.config {
        Some(path) => Settings::from_config_file(path)?,
        None => Settings::default(),
    };
    let settings = base.overlay(inv.settings);
    let out = settings.out.clone();
    let spec = settings.into_spec(point)?;

    let rows: Vec<SweepRow> = if point {
        vec![run_point(&spec)?]
    } else {
        run_sweep(&spec)?
    };
    let singular = rows.iter().filter(|r| r.singular).count();
    if singular > 0 {
        log::warn!("{singular} grid point(s) sit on a rate singularity and were flagged");
    }
    match out {
        Some(path) => ness_core::emit(&rows, spec.format, &path)?,
        None => {
            let mut stdout = std::io::stdout().lock();
            write_rows(&rows, spec.format, &mut stdout)?;
            stdout.flush().context("cannot write to stdout")?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("ness: {e:#}");
            ExitCode::FAILURE
        }
    }
}
