use std::path::Path;
use std::process::ExitCode;

use prdesc_core::{ArityMismatch, CapacityError, EvalError, SyntaxError};
use thiserror::Error;

/// Exit statuses of `pru`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    NotEqual = 1,
    Usage = 2,
    Budget = 3,
    Unknown = 4,
    Capacity = 5,
}

impl From<Status> for ExitCode {
    fn from(s: Status) -> ExitCode {
        ExitCode::from(s as u8)
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Arity(#[from] ArityMismatch),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error("{0}")]
    Budget(String),
    #[error(transparent)]
    Capacity(#[from] CapacityError),
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> CliError {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    pub fn status(&self) -> Status {
        match self {
            CliError::Eval(EvalError::BudgetExceeded { .. }) | CliError::Budget(_) => Status::Budget,
            CliError::Capacity(_) => Status::Capacity,
            _ => Status::Usage,
        }
    }
}
