//! One function per subcommand. Each runs the study described by an already
//! validated [`RunConfig`] and writes its files into the output directory.

use chtumor_core::discretization::norm_h;
use chtumor_core::solver::{energy_check, solve, GenEstReport, Regime};
use chtumor_core::studies::{
    candidate_trajectory, manufactured_run, nonuniqueness_demo, run_sweep_with, NonUniquenessReport, OrderReport,
    StudyResult,
};
use serde::Serialize;

use crate::config::{Command, RunConfig};
use crate::error::{CliError, Result};
use crate::output::{self, OutputDir, Summary};
use crate::runner::Threaded;

fn run_err(context: &'static str) -> impl Fn(chtumor_core::Error) -> CliError {
    move |source| CliError::Run { context, source }
}

/// A configuration that passed validation but cannot be assembled is a bug
/// in the validator, yet it still deserves a clean report.
fn assembled<T>(r: std::result::Result<T, String>) -> Result<T> {
    r.map_err(|m| CliError::Config(vec![m]))
}

#[derive(Debug, Serialize)]
pub struct Conservation {
    pub initial: f64,
    pub drift: f64,
}

#[derive(Debug, Serialize)]
pub struct EnergySummary {
    pub initial: f64,
    pub last: f64,
    pub max_increase: f64,
}

#[derive(Debug, Serialize)]
pub struct NewtonSummary {
    pub max_iterations: usize,
    pub retried_steps: usize,
    pub backtracks: usize,
    pub quadratic_constant: Option<f64>,
}

#[derive(Debug, Serialize)]
pub struct SimulateResult {
    pub regime: &'static str,
    pub steps: usize,
    pub final_time: f64,
    pub conservation: Conservation,
    pub energy: EnergySummary,
    pub genest: GenEstReport,
    pub newton: NewtonSummary,
    /// `‖μ(T)‖_H`, `‖φ(T)‖_H`, `‖σ(T)‖_H`.
    pub final_norms: [f64; 3],
}

#[derive(Debug, Serialize)]
pub struct ManufacturedResult {
    pub spatial: OrderReport,
    pub temporal: OrderReport,
}

/// What a finished command hands back to `main`.
#[derive(Debug)]
pub enum Outcome {
    Simulate(Box<SimulateResult>),
    Sweep(Box<StudyResult>),
    Nonuniq(NonUniquenessReport),
    Manufactured(ManufacturedResult),
}

pub fn execute(command: Command, cfg: &RunConfig, jobs: usize) -> Result<Outcome> {
    let dir = OutputDir::create(cfg.output_dir())?;
    dir.write_text("config.toml", &cfg.to_toml()?)?;
    match command {
        Command::Simulate => simulate(cfg, &dir).map(|r| Outcome::Simulate(Box::new(r))),
        Command::SweepBeta | Command::SweepAlpha => sweep(command, cfg, jobs, &dir).map(|r| Outcome::Sweep(Box::new(r))),
        Command::Nonuniq => nonuniq(cfg, &dir).map(Outcome::Nonuniq),
        Command::Manufactured => manufactured(cfg, &dir).map(Outcome::Manufactured),
    }
}

fn write_summary<R: Serialize>(dir: &OutputDir, command: Command, result: &R, cfg: &RunConfig) -> Result<()> {
    if cfg.format().json() {
        dir.write_json("summary.json", &Summary::new(command.name(), result, cfg))?;
    }
    Ok(())
}

pub fn simulate(cfg: &RunConfig, dir: &OutputDir) -> Result<SimulateResult> {
    let params = assembled(cfg.model_params())?;
    let grid = cfg.grid().map_err(run_err("grid"))?;
    let solver = cfg.solver_config();
    let initial = cfg.initial().state(grid, &params.potential).map_err(run_err("initial data"))?;
    log::info!("simulating to t = {} with dt = {}", params.final_time, solver.dt);
    let traj = solve(&initial, &params, &solver).map_err(run_err("time stepping"))?;
    let report = energy_check(&traj, &params).map_err(run_err("energy diagnostics"))?;
    let (drift, q0) = traj.conservation_drift(&params);
    let last = traj.last();

    let result = SimulateResult {
        regime: match params.regime() {
            Regime::Viscous => "viscous",
            Regime::BetaLimit => "beta_limit",
            Regime::AlphaLimit => "alpha_limit",
        },
        steps: traj.len() - 1,
        final_time: last.t,
        conservation: Conservation { initial: q0, drift },
        energy: EnergySummary {
            initial: report.energies[0],
            last: *report.energies.last().expect("at least the initial energy"),
            max_increase: report.max_increase,
        },
        genest: report.genest.clone(),
        newton: NewtonSummary {
            max_iterations: traj.stats.iter().map(|s| s.iterations).max().unwrap_or(0),
            retried_steps: traj.stats.iter().filter(|s| s.retried).count(),
            backtracks: traj.stats.iter().map(|s| s.backtracks).sum(),
            quadratic_constant: traj.newton_quadratic_constant(),
        },
        final_norms: [norm_h(&last.mu), norm_h(&last.phi), norm_h(&last.sigma)],
    };

    write_summary(dir, Command::Simulate, &result, cfg)?;
    if cfg.format().csv() {
        let times: Vec<f64> = traj.states.iter().map(|s| s.t).collect();
        let conserved = traj.conserved_series(&params);
        dir.write_text(
            "timeseries.csv",
            &output::series_csv(&times, &[("energy", &report.energies), ("conserved", &conserved)]),
        )?;
        dir.write_text("fields.csv", &output::field_csv(last))?;
        let every = cfg.output.checkpoint_every.unwrap_or(0);
        if every > 0 {
            for (k, state) in traj.states.iter().enumerate().step_by(every) {
                dir.write_text(&format!("fields_{k:06}.csv"), &output::field_csv(state))?;
            }
        }
    }
    Ok(result)
}

pub fn sweep(command: Command, cfg: &RunConfig, jobs: usize, dir: &OutputDir) -> Result<StudyResult> {
    let sweep = assembled(cfg.sweep_config(command))?;
    let runner = Threaded::new(jobs);
    log::info!(
        "{}: {} members on {} thread(s)",
        command.name(),
        sweep.values.len(),
        runner.jobs()
    );
    let result = run_sweep_with(&sweep, &runner).map_err(run_err("sweep"))?;
    log::info!("observed rate {:.4} (R^2 {:.4})", result.fit.rate, result.fit.r2);
    for note in &result.notes {
        log::warn!("{note}");
    }
    write_summary(dir, command, &result, cfg)?;
    if cfg.format().csv() {
        dir.write_text("sweep.csv", &output::sweep_csv(&result))?;
        dir.write_text("loglog.dat", &output::loglog_dat(&result))?;
    }
    Ok(result)
}

pub fn nonuniq(cfg: &RunConfig, dir: &OutputDir) -> Result<NonUniquenessReport> {
    let setup = assembled(cfg.nonuniq_config())?;
    let (psi_a, psi_b) = cfg.psi();
    let (fa, fb) = (move |t| psi_a.eval(t), move |t| psi_b.eval(t));
    let report = nonuniqueness_demo(&setup, &fa, &fb).map_err(run_err("non-uniqueness construction"))?;
    write_summary(dir, Command::Nonuniq, &report, cfg)?;
    if cfg.format().csv() {
        let a = candidate_trajectory(&setup, &fa).map_err(run_err("candidate a"))?;
        let b = candidate_trajectory(&setup, &fb).map_err(run_err("candidate b"))?;
        let times: Vec<f64> = a.states.iter().map(|s| s.t).collect();
        let phi = |traj: &chtumor_core::solver::Trajectory| -> Vec<f64> {
            traj.states.iter().map(|s| s.phi.values()[0]).collect()
        };
        dir.write_text(
            "candidates.csv",
            &output::series_csv(&times, &[("phi_a", &phi(&a)), ("phi_b", &phi(&b))]),
        )?;
    }
    Ok(report)
}

pub fn manufactured(cfg: &RunConfig, dir: &OutputDir) -> Result<ManufacturedResult> {
    let sol = cfg.manufactured_solution();
    let ((spatial_params, spatial_levels), (temporal_params, temporal_levels)) = assembled(cfg.manufactured_levels())?;
    let solver = cfg.solver_config();
    log::info!("spatial refinement over {} levels", spatial_levels.len());
    let spatial =
        manufactured_run(&sol, &spatial_params, &spatial_levels, &solver).map_err(run_err("spatial refinement"))?;
    log::info!("temporal refinement over {} levels", temporal_levels.len());
    let temporal =
        manufactured_run(&sol, &temporal_params, &temporal_levels, &solver).map_err(run_err("temporal refinement"))?;
    let result = ManufacturedResult { spatial, temporal };
    write_summary(dir, Command::Manufactured, &result, cfg)?;
    if cfg.format().csv() {
        dir.write_text(
            "orders.csv",
            &output::order_csv(&[("spatial", &result.spatial), ("temporal", &result.temporal)]),
        )?;
    }
    Ok(result)
}
