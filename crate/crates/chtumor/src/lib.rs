//! Front end for `chtumor-core`: TOML configuration, a threaded sweep runner,
//! JSON/CSV output and the `chtumor` binary.

pub mod cli;
pub mod commands;
pub mod config;
pub mod defaults;
pub mod error;
pub mod output;
pub mod runner;

pub use config::{parse_config, parse_config_str, Command, RunConfig};
pub use error::{CliError, Result};
