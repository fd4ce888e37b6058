//! `complexkit` command line. [`execute`] is the whole program; `main` only
//! forwards the process arguments and exit code.
//!
//! Exit codes: 0 success, 1 domain error (bad rule, degenerate strategy,
//! invalid parameters), 2 I/O or parse error (missing file, malformed
//! pattern or config, usage error).

mod args;
mod commands;
mod config;

use std::ffi::OsString;

use clap::error::ErrorKind;
use clap::Parser;
use thiserror::Error;

pub use args::Cli;

#[derive(Debug, Error)]
pub enum Failure {
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Input(String),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Domain(_) => 1,
            Failure::Input(_) => 2,
        }
    }
}

macro_rules! domain_errors {
    ($($ty:ty),*) => {
        $(impl From<$ty> for Failure {
            fn from(e: $ty) -> Self {
                Failure::Domain(e.to_string())
            }
        })*
    };
}

domain_errors!(
    complexkit::AutomatonError,
    complexkit::cas::CasError,
    complexkit::complexity::ComplexityError,
    complexkit::dynamics::DynamicsError,
    complexkit::evolution::EvolutionError
);

impl From<complexkit::PatternError> for Failure {
    fn from(e: complexkit::PatternError) -> Self {
        match e {
            complexkit::PatternError::Parse { .. } => Failure::Input(e.to_string()),
            _ => Failure::Domain(e.to_string()),
        }
    }
}

/// Parses `argv` (program name first), runs the subcommand and returns the
/// process exit code. Diagnostics go to stderr.
pub fn execute<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
        }
    };
    match commands::dispatch(cli) {
        Ok(()) => 0,
        Err(f) => {
            eprintln!("error: {f}");
            f.exit_code()
        }
    }
}
