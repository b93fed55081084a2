use std::process::ExitCode;

use clap::Parser;

use chtumor::cli::Cli;
use chtumor::commands;
use chtumor::error::CliError;
use chtumor::output::{failure_json, OutputDir};
use chtumor::runner::Threaded;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("CHTUMOR_LOG", "info")).init();
    let cli = Cli::parse();
    let (command, common) = cli.command.split();

    let cfg = match common.load(command) {
        Ok(cfg) => cfg,
        Err(e) => return fail(&e, None),
    };
    let jobs = common.jobs.unwrap_or_else(|| Threaded::available().jobs());
    match commands::execute(command, &cfg, jobs) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => fail(&e, Some(cfg.output_dir())),
    }
}

/// Reports on stderr and, when an output directory is known, in `failure.json`.
fn fail(err: &CliError, dir: Option<&str>) -> ExitCode {
    let report = err.report();
    let json = failure_json(&report);
    log::error!("{err}");
    eprintln!("{json}");
    if let Some(dir) = dir {
        if let Err(e) = OutputDir::create(dir).and_then(|d| d.write_text("failure.json", &format!("{json}\n"))) {
            log::error!("{e}");
        }
    }
    ExitCode::from(report.exit_code)
}
