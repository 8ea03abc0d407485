//! `vecbeam <command> [--config PATH] [--out DIR] [key=value overrides]`

// `!(x > 0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod commands;
mod config;
mod error;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use crate::commands::Ctx;
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Command {
    /// Write the two SLM phase masks as 8-bit PGM.
    Mask,
    /// Run the converter; write the vector field (VBF1) and its intensity.
    Convert,
    /// Images behind a linear polarizer at the configured angles.
    PolarizerScan,
    /// Simulate a rotating-QWP frame stack with a manifest.
    StokesSim,
    /// Fourier Stokes reconstruction from a frame directory.
    StokesAnalyze,
    /// Squeezing loss budget.
    SqueezeBudget,
    /// Summary table over all supported modes plus the loss budget.
    Report,
}

#[derive(Debug, Parser)]
#[command(name = "vecbeam", version, about = "Vector beam simulator")]
struct Args {
    command: Command,
    /// TOML run configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Output directory (created if missing).
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Allow mode indices outside p <= 1, 1 <= l <= 3.
    #[arg(long)]
    extended: bool,
    /// Config overrides such as `slm.eta_mod=1.0`.
    overrides: Vec<String>,
}

fn init_threads() -> Result<(), CliError> {
    let Ok(v) = std::env::var("VECBEAM_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("VECBEAM_THREADS must be a positive integer, got {v:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Config(e.to_string()))
}

fn run(args: Args) -> Result<String, CliError> {
    init_threads()?;
    let loaded = config::load(args.config.as_deref(), &args.overrides)?;
    std::fs::create_dir_all(&args.out)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", args.out.display())))?;
    std::fs::write(args.out.join("run.toml"), config::to_toml(&loaded.config))?;
    let ctx = Ctx { loaded, out: args.out, extended: args.extended };
    match args.command {
        Command::Mask => commands::mask(&ctx),
        Command::Convert => commands::convert_cmd(&ctx),
        Command::PolarizerScan => commands::polarizer_scan(&ctx),
        Command::StokesSim => commands::stokes_sim(&ctx),
        Command::StokesAnalyze => commands::stokes_analyze(&ctx),
        Command::SqueezeBudget => commands::squeeze_budget(&ctx),
        Command::Report => commands::report(&ctx),
    }
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(summary) => {
            print!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("vecbeam: {e}");
            e.exit_code()
        }
    }
}
