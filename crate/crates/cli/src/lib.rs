//! Scenario-driven batch interface: parse a scenario file, build the state,
//! evaluate witness/monogamy/inference plans (optionally over a parameter
//! sweep) and emit deterministic reports, tables and graphs.

pub mod export;
pub mod report;
pub mod runner;
pub mod scenario;
pub mod table;

use thiserror::Error;

/// Errors split by exit code: validation problems exit 1, runtime problems
/// exit 2.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("validation error: {0}")]
    Validation(String),
    #[error("runtime error: {0}")]
    Runtime(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Validation(_) => 1,
            CliError::Runtime(_) => 2,
        }
    }
}

impl From<qsteer_core::Error> for CliError {
    fn from(e: qsteer_core::Error) -> Self {
        CliError::Runtime(e.to_string())
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
