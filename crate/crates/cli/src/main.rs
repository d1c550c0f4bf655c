mod args;
mod commands;

use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::Parser;
use idest::Error;

use args::{Cli, Command};

/// Failure classes, one per exit code.
#[derive(Debug)]
pub enum CliError {
    /// Bad flags, configuration or manifold spec: exit 1.
    Usage(String),
    /// Unreadable or malformed input: exit 2.
    Data(String),
    /// The estimator ran but produced nothing usable: exit 3.
    Numerical(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Numerical(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Numerical(m) => m,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let msg = e.to_string();
        match e {
            Error::Config(_) | Error::Spec(_) | Error::KTooLarge { .. } | Error::DimensionMismatch { .. } => {
                CliError::Usage(msg)
            }
            Error::InvalidCloud(_) | Error::Parse(_) | Error::Io(_) | Error::MissingEntries(_) => {
                CliError::Data(msg)
            }
            Error::AllPointsFailed { .. }
            | Error::RankDeficient(_)
            | Error::ZeroVariance
            | Error::DegenerateNeighborhood(_)
            | Error::EmptyBall(_) => CliError::Numerical(msg),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Data(e.to_string())
    }
}

fn thread_count(flag: Option<usize>) -> Result<Option<usize>, CliError> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var("IDEST_THREADS") {
        Ok(v) if !v.trim().is_empty() => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("IDEST_THREADS must be a positive integer, got `{v}`"))),
        _ => Ok(None),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = thread_count(cli.threads)? {
        if n == 0 {
            return Err(CliError::Usage("--threads must be ≥ 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    match &cli.command {
        Command::Generate(a) => commands::generate_cmd(a),
        Command::Estimate(a) => commands::estimate_cmd(a),
        Command::Bench(a) => commands::bench_cmd(a),
        Command::Noise(a) => commands::noise_cmd(a),
        Command::DolanMore(a) => commands::dolan_more_cmd(a),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(1),
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.code())
        }
    }
}
