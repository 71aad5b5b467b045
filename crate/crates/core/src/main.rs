use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use equilib::cli::{execute, Command, RunConfig};

/// Chemical-equilibrium curves, paths and cell potentials from a TOML config.
#[derive(Debug, Parser)]
#[command(name = "equilib", version)]
struct Args {
    /// Run configuration (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output CSV path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Command to run; overrides the config's `command` key.
    #[arg(long, value_enum)]
    command: Option<Command>,
    /// Seed for the randomized gradient self-check.
    #[arg(long)]
    seed: Option<u64>,
    /// Only report errors.
    #[arg(long)]
    quiet: bool,
}

fn main() -> ExitCode {
    let args = Args::parse();
    let default_level = if args.quiet { "error" } else { "warn" };
    let mut logger = env_logger::Builder::from_env(env_logger::Env::new().filter_or("EQUILIB_LOG", default_level));
    if args.quiet {
        logger.filter_level(log::LevelFilter::Error);
    }
    logger.init();

    let result = RunConfig::from_path(&args.config).and_then(|cfg| {
        let base = args.config.parent().map(PathBuf::from).unwrap_or_default();
        execute(&cfg, args.command, &base, args.seed)
    });
    let csv = match result {
        Ok(csv) => csv,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let written = match &args.out {
        Some(path) => std::fs::write(path, csv).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            print!("{csv}");
            Ok(())
        }
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
