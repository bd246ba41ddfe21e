mod bench;
mod recover;
mod sweep;
mod theory;

use std::fmt;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

/// Environment variable consulted for the master seed when `--seed` is absent.
pub const SEED_ENV: &str = "DENSEMEM_SEED";

#[derive(Parser)]
#[command(name = "densemem", version, about = "Dense associative memory simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Capacity thresholds, rate function and polynomial constants.
    Theory(theory::Args),
    /// Corrupt a stored pattern and run the dynamics once.
    Recover(recover::Args),
    /// Run a Monte Carlo sweep described by a JSON config.
    Sweep(sweep::Args),
    /// Time a small sweep sequentially and in parallel.
    Bench(bench::Args),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Table,
    Json,
    Csv,
}

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or configuration; exit code 2.
    Usage(String),
    /// I/O failure; exit code 1.
    Io(String),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) => f.write_str(m),
        }
    }
}

impl From<densemem::Error> for CliError {
    fn from(e: densemem::Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Theory(a) => theory::run(a),
        Command::Recover(a) => recover::run(a),
        Command::Sweep(a) => sweep::run(a),
        Command::Bench(a) => bench::run(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                CliError::Usage(_) => 2,
                CliError::Io(_) => 1,
            })
        }
    }
}

/// Aligned two-column text.
pub fn table(rows: &[(&str, String)]) -> String {
    let width = rows.iter().map(|r| r.0.len()).max().unwrap_or(0);
    rows.iter().map(|(k, v)| format!("{k:<width$}  {v}\n")).collect()
}
