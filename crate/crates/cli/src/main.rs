use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use nlse_forge_cli::{run, Command, RunConfig, THREADS_ENV};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Cmd {
    Construct,
    Verify,
    Evolve,
    Sweep,
    Susy,
}

impl From<Cmd> for Command {
    fn from(c: Cmd) -> Self {
        match c {
            Cmd::Construct => Command::Construct,
            Cmd::Verify => Command::Verify,
            Cmd::Evolve => Command::Evolve,
            Cmd::Sweep => Command::Sweep,
            Cmd::Susy => Command::Susy,
        }
    }
}

/// Exact solutions and numerical checks for a coupled NLSE with balanced loss-gain.
#[derive(Debug, Parser)]
#[command(version)]
struct Args {
    #[arg(value_enum)]
    command: Cmd,
    /// Run configuration in flat `key = value` form.
    #[arg(long)]
    config: PathBuf,
    /// Output directory, overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for perturbations, overrides `seed`.
    #[arg(long)]
    seed: Option<u64>,
}

fn fail(code: u8, msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(code)
}

fn main() -> ExitCode {
    let args = Args::parse();
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
                    return fail(1, e);
                }
            }
            _ => return fail(1, format!("{THREADS_ENV} must be a positive integer, got '{v}'")),
        }
    }
    let text = match std::fs::read_to_string(&args.config) {
        Ok(t) => t,
        Err(e) => return fail(1, format!("{}: {e}", args.config.display())),
    };
    let mut cfg = match RunConfig::parse(&text, Some(args.command.into())) {
        Ok(c) => c,
        Err(e) => return fail(1, e),
    };
    if let Some(out) = args.out {
        cfg.output_dir = out;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    match run(&cfg) {
        Ok(summary) => {
            println!("{summary}");
            ExitCode::SUCCESS
        }
        Err(e) => fail(e.exit_code() as u8, e),
    }
}
