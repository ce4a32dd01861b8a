//! Configuration parsing and command handlers behind the `nlse-forge` binary.

pub mod config;
pub mod run;

pub use config::{Command, ConfigError, RunConfig};
pub use run::{run, RunError};

/// Environment variable that caps the worker thread count.
pub const THREADS_ENV: &str = "NLSE_FORGE_THREADS";
