use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use bethe_weights::verify::{
    compute, error_code, exit_code, parse_checks, parse_pattern, run, Kind, RunConfig, VectorDoc,
};
use bethe_weights::Error;

#[derive(Parser)]
#[command(name = "bethe-verify", version, about = "Check off-shell Bethe vector identities in exact arithmetic")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Emit {
    Text,
    Machine,
}

#[derive(Subcommand)]
enum Command {
    /// Run identity checks and report.
    Run {
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        factors: Option<usize>,
        /// Comma-separated colours; an empty string is the empty pattern.
        #[arg(long)]
        pattern: Option<String>,
        /// Base seed; repeatable.
        #[arg(long = "seed")]
        seeds: Vec<u64>,
        #[arg(long, default_value_t = 5)]
        trials: usize,
        /// Comma-separated check names, or `all`.
        #[arg(long, default_value = "all")]
        checks: String,
        #[arg(long, value_enum, default_value_t = Emit::Text)]
        emit: Emit,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall time per check (makes reports non-reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Print one weight-function vector.
    Compute {
        #[arg(long, value_parser = ["bethe", "projection"])]
        kind: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        factors: usize,
        #[arg(long, default_value = "")]
        pattern: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), Error> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Error::ConfigInvalid(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn fail(e: &Error) -> ExitCode {
    eprintln!("error: {e}");
    ExitCode::from(error_code(e) as u8)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::Run { n, factors, pattern, seeds, trials, checks, emit: fmt, out, timings } => {
            let config = (|| -> Result<RunConfig, Error> {
                Ok(RunConfig {
                    n,
                    factors,
                    pattern: pattern.as_deref().map(parse_pattern).transpose()?,
                    seeds: if seeds.is_empty() { vec![0] } else { seeds },
                    trials,
                    checks: parse_checks(&checks)?,
                    timings,
                })
            })();
            let config = match config {
                Ok(c) => c,
                Err(e) => return fail(&e),
            };
            let outcome = run(&config);
            match &outcome {
                Ok(report) => {
                    let text = match fmt {
                        Emit::Text => report.to_text(),
                        Emit::Machine => report.to_json() + "\n",
                    };
                    if let Err(e) = emit(&text, out.as_ref()) {
                        return fail(&e);
                    }
                }
                Err(e) => return fail(e),
            }
            ExitCode::from(exit_code(&outcome) as u8)
        }
        Command::Compute { kind, n, factors, pattern, seed, out } => {
            let result = (|| -> Result<String, Error> {
                let kind: Kind = kind.parse()?;
                let v = compute(kind, n, factors, &parse_pattern(&pattern)?, seed)?;
                Ok(VectorDoc::from_ket(&v).to_json() + "\n")
            })();
            match result.and_then(|text| emit(&text, out.as_ref())) {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => fail(&e),
            }
        }
    }
}
