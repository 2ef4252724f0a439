//! Orchestration layer behind the `hyperloc` binary: config files, table
//! output, verification suites and golden regressions.

pub mod checks;
pub mod commands;
pub mod config;
pub mod golden;
pub mod output;
pub mod registry;

use std::fmt;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// Failure classes, one per process exit code.
#[derive(Debug)]
pub enum CliError {
    /// bad config, flag or request; exit 2
    Validation(String),
    /// the numerics broke down; exit 3
    Numerical(String),
    /// a check ran and missed its tolerance; exit 1
    Verification(String),
    /// filesystem trouble; exit 3
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Verification(_) => 1,
            CliError::Validation(_) => 2,
            CliError::Numerical(_) | CliError::Io(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Validation(m) => write!(f, "validation error: {m}"),
            CliError::Numerical(m) => write!(f, "numerical failure: {m}"),
            CliError::Verification(m) => write!(f, "verification failed: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<hyperloc::Error> for CliError {
    fn from(e: hyperloc::Error) -> Self {
        if e.is_validation() {
            CliError::Validation(e.to_string())
        } else {
            CliError::Numerical(e.to_string())
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Io(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
