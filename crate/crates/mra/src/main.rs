use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use mra::{run_file, threads_from_env, Kind, RunOptions};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Command {
    Check,
    Simulate,
    Ensemble,
    Absorb,
    Decay,
    EntryTime,
    Steady,
    OracleCompare,
}

impl From<Command> for Kind {
    fn from(c: Command) -> Kind {
        match c {
            Command::Check => Kind::Check,
            Command::Simulate => Kind::Simulate,
            Command::Ensemble => Kind::Ensemble,
            Command::Absorb => Kind::Absorb,
            Command::Decay => Kind::Decay,
            Command::EntryTime => Kind::EntryTime,
            Command::Steady => Kind::Steady,
            Command::OracleCompare => Kind::OracleCompare,
        }
    }
}

/// Run an attractor-lab experiment described by a TOML manifest.
#[derive(Debug, Parser)]
#[command(name = "mra", version)]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    #[arg(long)]
    manifest: PathBuf,
    /// Overrides `ensemble.seed`.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides `output.dir`.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let opts = RunOptions {
        threads: threads_from_env(),
        seed: cli.seed,
        out: cli.out,
    };
    match run_file(&cli.manifest, cli.command.into(), &opts) {
        Ok(outcome) => {
            for v in &outcome.verdicts {
                let margin = v.margin.map_or(String::new(), |m| format!(" (margin {m:.6e})"));
                println!("{}: {}{margin}", v.name, if v.pass { "pass" } else { "fail" });
            }
            for a in &outcome.artifacts {
                println!("wrote {}", a.display());
            }
            ExitCode::from(if outcome.pass { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
