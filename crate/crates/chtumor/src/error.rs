use std::path::PathBuf;

use serde::Serialize;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Every violation found in the configuration, not just the first.
    #[error("invalid configuration:\n  {}", .0.join("\n  "))]
    Config(Vec<String>),
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{context}: {source}")]
    Run {
        context: &'static str,
        #[source]
        source: chtumor_core::Error,
    },
    #[error("cannot serialize output: {0}")]
    Serialize(String),
}

impl CliError {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        CliError::Io {
            context: context.into(),
            source,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Config(_) => "config",
            CliError::Parse { .. } => "parse",
            CliError::Io { .. } => "io",
            CliError::Run { .. } => "run",
            CliError::Serialize(_) => "serialize",
        }
    }

    /// Process exit status for this failure.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Parse { .. } => 2,
            CliError::Run { .. } => 3,
            CliError::Io { .. } | CliError::Serialize(_) => 4,
        }
    }

    pub fn report(&self) -> FailureReport {
        let messages = match self {
            CliError::Config(list) => list.clone(),
            other => vec![other.to_string()],
        };
        FailureReport {
            status: "error",
            kind: self.kind(),
            exit_code: self.exit_code(),
            messages,
        }
    }
}

/// Machine-readable failure cause, printed to stderr and written to `failure.json`.
#[derive(Debug, Serialize)]
pub struct FailureReport {
    pub status: &'static str,
    pub kind: &'static str,
    pub exit_code: u8,
    pub messages: Vec<String>,
}

pub type Result<T> = std::result::Result<T, CliError>;
