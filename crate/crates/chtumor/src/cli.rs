//! Command-line surface.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{self, Command, Format, RunConfig};
use crate::error::Result;

#[derive(Debug, Parser)]
#[command(name = "chtumor", version, about = "Cahn–Hilliard tumor model: simulations, limit sweeps and checks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Sub,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// Solve one configuration and write diagnostics and fields.
    Simulate(Common),
    /// Sweep beta toward zero at fixed alpha and fit the rate.
    SweepBeta(Common),
    /// Sweep alpha toward zero at fixed beta and fit the rate.
    SweepAlpha(Common),
    /// Audit two distinct exact solutions at the threshold alpha * L = 1.
    Nonuniq(Common),
    /// Observed spatial and temporal orders against an exact solution.
    Manufactured(Common),
}

#[derive(Debug, Args)]
pub struct Common {
    /// TOML configuration file.
    #[arg(short, long)]
    pub config: PathBuf,
    /// Output directory; overrides `output.dir`.
    #[arg(short, long)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps; defaults to the number of cores.
    #[arg(short, long)]
    pub jobs: Option<usize>,
    /// Output format; overrides `output.format`.
    #[arg(long, value_enum)]
    pub format: Option<FormatArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum FormatArg {
    Json,
    Csv,
    Both,
}

impl From<FormatArg> for Format {
    fn from(f: FormatArg) -> Self {
        match f {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
            FormatArg::Both => Format::Both,
        }
    }
}

impl Sub {
    pub fn split(&self) -> (Command, &Common) {
        match self {
            Sub::Simulate(c) => (Command::Simulate, c),
            Sub::SweepBeta(c) => (Command::SweepBeta, c),
            Sub::SweepAlpha(c) => (Command::SweepAlpha, c),
            Sub::Nonuniq(c) => (Command::Nonuniq, c),
            Sub::Manufactured(c) => (Command::Manufactured, c),
        }
    }
}

impl Common {
    /// Parses the file and applies the command-line overrides, which then
    /// show up in the echoed configuration like any other key.
    pub fn load(&self, command: Command) -> Result<RunConfig> {
        let mut cfg = config::parse_config(&self.config, command)?;
        if let Some(out) = &self.out {
            cfg.output.dir = Some(out.display().to_string());
        }
        if let Some(format) = self.format {
            cfg.output.format = Some(format.into());
        }
        Ok(cfg)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn flags_parse() {
        let cli = Cli::try_parse_from(["chtumor", "sweep-beta", "-c", "a.toml", "--jobs", "3", "--format", "csv"]).unwrap();
        let (cmd, common) = cli.command.split();
        assert_eq!(cmd, Command::SweepBeta);
        assert_eq!(common.jobs, Some(3));
        assert!(matches!(common.format, Some(FormatArg::Csv)));
    }
}
