use std::path::PathBuf;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Boundary conditions or path that admit no trajectory.
    #[error("{0}")]
    Infeasible(String),
    /// A produced trajectory failed its collision audit.
    #[error("{0}")]
    Certification(String),
    #[error("{0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Error body written to stderr on failure.
#[derive(Debug, Serialize)]
pub struct ErrorReport<'a> {
    pub error: &'a str,
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Infeasible(_) => 2,
            CliError::Certification(_) => 3,
            CliError::Config(_) => 4,
            CliError::Io { .. } => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Infeasible(_) => "infeasible",
            CliError::Certification(_) => "certification",
            CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
        }
    }

    pub fn report(&self) -> ErrorReport<'_> {
        ErrorReport { error: self.kind(), message: self.to_string(), exit_code: self.exit_code() }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }
}

impl From<cfs45::sim::SimError> for CliError {
    fn from(e: cfs45::sim::SimError) -> Self {
        use cfs45::sim::SimError;
        match e {
            SimError::Config(m) => CliError::Config(m),
            SimError::NoPath(_) => CliError::Infeasible(e.to_string()),
            SimError::Path(p) => p.into(),
        }
    }
}

impl From<cfs45::path::PathError> for CliError {
    fn from(e: cfs45::path::PathError) -> Self {
        use cfs45::path::PathError;
        match e {
            PathError::SegmentInCollision(_) | PathError::Infeasible(_) => CliError::Infeasible(e.to_string()),
            _ => CliError::Config(e.to_string()),
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
