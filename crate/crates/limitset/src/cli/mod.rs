//! The human-facing surface: configuration files, command dispatch, CSV and
//! SVG emission, and the on-disk element cache.
//!
//! Exit codes: 0 success, 2 configuration error, 3 computation error,
//! 4 verification failure. Errors leave a machine-readable one-line JSON
//! record on stderr.

pub mod cache;
pub mod commands;
pub mod config;
pub mod expr;
pub mod fmt;
pub mod render;

pub use commands::{run_command, Command, CommandOutput, RunParams};
pub use config::{parse_config, print_config, ConfigError, ParsedConfig};

use crate::limitsets::LimitSetError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Computation(String),
    #[error("verification failed: {}", .0.join("; "))]
    Verification(Vec<String>),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn from_compute(e: LimitSetError) -> Self {
        CliError::Computation(e.to_string())
    }

    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Computation(_) | CliError::Io(_) => 3,
            CliError::Verification(_) => 4,
        }
    }

    /// One-line machine-readable error record.
    pub fn error_record(&self) -> String {
        let kind = match self {
            CliError::Config(ConfigError::Parse { .. }) => "ParseError",
            CliError::Config(ConfigError::DetNotOne { .. }) => "DetNotOne",
            CliError::Config(ConfigError::NotIntegral { .. }) => "NotIntegral",
            CliError::Config(ConfigError::NormNotOne { .. }) => "NormNotOne",
            CliError::Config(_) => "ConfigError",
            CliError::Computation(_) => "ComputationError",
            CliError::Verification(_) => "VerificationFailure",
            CliError::Io(_) => "IoError",
        };
        format!(
            "{{\"error\":\"{}\",\"message\":\"{}\"}}",
            kind,
            json_escape(&self.to_string())
        )
    }
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}
