//! `ptmetric`: spectra, metric application, verification and parameter
//! sweeps from the command line.
//!
//! Exit codes: 0 success, 1 failed checks or I/O errors, 2 usage errors,
//! 3 degenerate `alpha` where eigenfunctions are required.

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command, MetricCommand};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Degenerate(String),
    /// Checks ran but some failed; the report has already been written.
    ChecksFailed(String),
    Other(anyhow::Error),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Degenerate(_) => 3,
            CliError::ChecksFailed(_) | CliError::Other(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Degenerate(m) | CliError::ChecksFailed(m) => f.write_str(m),
            CliError::Other(e) => write!(f, "{e:#}"),
        }
    }
}

impl From<ptmetric::Error> for CliError {
    fn from(e: ptmetric::Error) -> Self {
        use ptmetric::Error as E;
        match e {
            E::Degenerate(flag) => CliError::Degenerate(format!(
                "{e}; alpha*d/pi = {} makes two eigenvalues coincide, so the eigenfunction series is undefined \
                 (the closed-form metric still exists: use --method closed)",
                flag.m.unwrap_or(0)
            )),
            E::Io(_) => CliError::Other(e.into()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Other(e.into())
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Other(e.into())
    }
}

pub type CliResult<T> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Spectrum => commands::spectrum(&cli.run),
        Command::Metric(MetricCommand::Apply { input, method }) => commands::metric_apply(&cli.run, input, *method),
        Command::Verify { suite } => commands::verify(&cli.run, *suite),
        Command::Sweep { param, range, plot_data } => commands::sweep(&cli.run, *param, range, *plot_data),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
