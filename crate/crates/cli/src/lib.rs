//! Command implementations behind the `cfs45` binary.

pub mod app;
pub mod commands;
pub mod config;
pub mod error;
pub mod export;

pub use error::{CliError, Result};
