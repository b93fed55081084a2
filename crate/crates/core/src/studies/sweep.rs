use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::fit::{fit_rate, RateFit};
use super::InitialData;
use crate::discretization::{norm_h, norm_v, time_l2, time_linf, Field, Grid, RieszOperator};
use crate::error::{Error, Result};
use crate::potentials::{PotentialFamily, PotentialSpec, Proliferation};
use crate::solver::{genest, solve, ModelParams, SolverConfig, State, Trajectory};

/// Default sweep values, largest first.
pub const DEFAULT_SWEEP_VALUES: [f64; 5] = [1e-1, 3e-2, 1e-2, 3e-3, 1e-3];

/// Which viscosity goes to zero, together with the one held fixed.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum SweepKind {
    Beta { alpha: f64 },
    Alpha { beta: f64 },
}

impl SweepKind {
    pub fn swept_name(&self) -> &'static str {
        match self {
            SweepKind::Beta { .. } => "beta",
            SweepKind::Alpha { .. } => "alpha",
        }
    }

    pub fn fixed(&self) -> (&'static str, f64) {
        match *self {
            SweepKind::Beta { alpha } => ("alpha", alpha),
            SweepKind::Alpha { beta } => ("beta", beta),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SweepConfig {
    pub kind: SweepKind,
    /// Strictly decreasing values in `(0, 1)`.
    pub values: Vec<f64>,
    /// Swept parameter used for the reference solve; `0` solves the limit problem.
    pub reference: f64,
    pub grid: Grid,
    pub final_time: f64,
    pub gamma: f64,
    pub potential: PotentialSpec,
    pub proliferation: Proliferation,
    pub initial: InitialData,
    pub solver: SolverConfig,
}

impl SweepConfig {
    /// Reference configuration: 1D, `n = 128`, `T = 0.5`, `dt = 5e-4`, double
    /// well, `p ≡ 1`, `γ = 1`, default data and values.
    pub fn new(kind: SweepKind) -> Self {
        SweepConfig {
            kind,
            values: DEFAULT_SWEEP_VALUES.to_vec(),
            reference: 0.0,
            grid: Grid::line(128).expect("valid grid"),
            final_time: 0.5,
            gamma: 1.0,
            potential: PotentialSpec::double_well(),
            proliferation: Proliferation::Constant(1.0),
            initial: InitialData::default(),
            solver: SolverConfig {
                dt: 5e-4,
                ..SolverConfig::default()
            },
        }
    }

    pub fn beta_sweep(alpha: f64) -> Self {
        Self::new(SweepKind::Beta { alpha })
    }

    pub fn alpha_sweep(beta: f64) -> Self {
        Self::new(SweepKind::Alpha { beta })
    }

    pub fn validate(&self) -> Result<()> {
        if self.values.is_empty() {
            return Err(Error::InvalidConfig("sweep.values is empty".into()));
        }
        if let Some(&v) = self.values.iter().find(|&&v| !(v.is_finite() && v > 0.0 && v < 1.0)) {
            return Err(Error::InvalidConfig(format!(
                "sweep value {v} must lie in (0, 1); the limit problem is solved separately as reference"
            )));
        }
        if self.values.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidConfig("sweep.values must be strictly decreasing".into()));
        }
        let smallest = *self.values.last().expect("nonempty");
        if !(self.reference.is_finite() && self.reference >= 0.0 && self.reference < smallest) {
            return Err(Error::InvalidConfig(
                "sweep reference must be 0 or below the smallest sweep value".into(),
            ));
        }
        if let SweepKind::Alpha { .. } = self.kind {
            if !self.proliferation.is_constant() {
                return Err(Error::HypothesisViolation(
                    "the alpha-sweep requires that p is a nonnegative constant".into(),
                ));
            }
        }
        self.solver.validate()?;
        // every member and the reference are checked as full parameter sets
        self.params_for(self.values[0]).validate()?;
        if self.reference > 0.0 {
            self.params_for(self.reference).validate()?;
        }
        let limit = self.params_for(self.reference);
        match self.kind {
            SweepKind::Beta { alpha } if alpha == 0.0 => Err(Error::InvalidConfig(
                "the beta-sweep needs alpha > 0 for its limit problem".into(),
            )),
            SweepKind::Alpha { beta } if beta == 0.0 => Err(Error::InvalidConfig(
                "the alpha-sweep needs beta > 0 for its limit problem".into(),
            )),
            _ => limit.validate(),
        }
    }

    /// Model parameters with the swept viscosity set to `value`.
    pub fn params_for(&self, value: f64) -> ModelParams {
        let (alpha, beta) = match self.kind {
            SweepKind::Beta { alpha } => (alpha, value),
            SweepKind::Alpha { beta } => (value, beta),
        };
        ModelParams {
            alpha,
            beta,
            gamma: self.gamma,
            potential: self.potential,
            proliferation: self.proliferation,
            final_time: self.final_time,
        }
    }

    /// Whether the configuration satisfies the assumptions behind the `1/2` rate,
    /// with a note for each one that fails.
    pub fn hypotheses(&self) -> (bool, Vec<String>) {
        let mut notes = Vec::new();
        match self.kind {
            SweepKind::Beta { alpha } => {
                let l = self.potential.lipschitz();
                let smallness = (1.0 + l) * (1.0 + l) * alpha;
                if smallness >= 1.0 {
                    notes.push(format!(
                        "outside hypotheses: (1+L)^2 alpha = {smallness:.3} is not below 1"
                    ));
                }
            }
            SweepKind::Alpha { .. } => {
                if !matches!(self.potential.family, PotentialFamily::DoubleWell) {
                    notes.push(
                        "outside hypotheses: the alpha-sweep assumes a convex part defined on all of R \
                         with |F''(r)| <= C(r^2+1)"
                            .into(),
                    );
                }
            }
        }
        (notes.is_empty(), notes)
    }

    fn initial_state(&self) -> Result<State> {
        self.initial.state(self.grid, &self.potential)
    }
}

/// Executes independent sweep members; results come back in input order.
pub trait Runner {
    fn map<T, F>(&self, values: &[f64], job: F) -> Vec<Result<T>>
    where
        T: Send,
        F: Fn(f64) -> Result<T> + Sync;
}

/// Runs members one after another on the calling thread.
#[derive(Clone, Copy, Debug, Default)]
pub struct Sequential;

impl Runner for Sequential {
    fn map<T, F>(&self, values: &[f64], job: F) -> Vec<Result<T>>
    where
        T: Send,
        F: Fn(f64) -> Result<T> + Sync,
    {
        values.iter().map(|&v| job(v)).collect()
    }
}

/// One sweep member compared with the reference.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StudyRow {
    pub param: f64,
    pub composite: f64,
    /// Terms of the composite error, in the order they are summed.
    pub components: Vec<(String, f64)>,
    /// Reported only; not part of the composite.
    pub diagnostics: Vec<(String, f64)>,
    pub conservation_drift: f64,
    pub conserved_initial: f64,
    pub genest_aggregate: f64,
    pub genest_ratio: Option<f64>,
    pub newton_quadratic_constant: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ReferenceInfo {
    pub param: f64,
    pub steps: usize,
    pub conservation_drift: f64,
    pub conserved_initial: f64,
    pub genest_aggregate: f64,
    pub genest_ratio: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StudyResult {
    pub swept: &'static str,
    pub fixed_name: &'static str,
    pub fixed_value: f64,
    /// Ordered as `SweepConfig::values`.
    pub rows: Vec<StudyRow>,
    pub fit: RateFit,
    pub reference: ReferenceInfo,
    pub within_hypotheses: bool,
    pub notes: Vec<String>,
}

impl StudyResult {
    pub fn pairs(&self) -> Vec<(f64, f64)> {
        self.rows.iter().map(|r| (r.param, r.composite)).collect()
    }
}

/// Sweep of `β → 0` at fixed `α`, compared against the `β = 0` limit.
pub fn sweep_beta(cfg: &SweepConfig) -> Result<StudyResult> {
    if !matches!(cfg.kind, SweepKind::Beta { .. }) {
        return Err(Error::InvalidConfig("sweep_beta needs a beta-sweep configuration".into()));
    }
    run_sweep_with(cfg, &Sequential)
}

/// Sweep of `α → 0` at fixed `β`, compared against the `α = 0` limit.
pub fn sweep_alpha(cfg: &SweepConfig) -> Result<StudyResult> {
    if !matches!(cfg.kind, SweepKind::Alpha { .. }) {
        return Err(Error::InvalidConfig("sweep_alpha needs an alpha-sweep configuration".into()));
    }
    run_sweep_with(cfg, &Sequential)
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<StudyResult> {
    run_sweep_with(cfg, &Sequential)
}

pub fn run_sweep_with<R: Runner>(cfg: &SweepConfig, runner: &R) -> Result<StudyResult> {
    cfg.validate()?;
    let initial = cfg.initial_state()?;
    let riesz = RieszOperator::with_tolerance(cfg.grid, cfg.solver.lin_tol)?;

    let ref_params = cfg.params_for(cfg.reference);
    let wrap = |param: f64| move |e: Error| Error::SweepMember { param, source: Box::new(e) };
    let reference = solve(&initial, &ref_params, &cfg.solver).map_err(wrap(cfg.reference))?;
    let ref_report = genest(&reference, &ref_params, &riesz).map_err(wrap(cfg.reference))?;
    let (ref_drift, ref_q0) = reference.conservation_drift(&ref_params);

    let job = |value: f64| -> Result<StudyRow> {
        let params = cfg.params_for(value);
        let run = solve(&initial, &params, &cfg.solver)?;
        let (components, diagnostics) = match cfg.kind {
            SweepKind::Beta { alpha } => beta_errors(&run, &reference, alpha, &riesz)?,
            SweepKind::Alpha { .. } => (alpha_errors(&run, &reference)?, Vec::new()),
        };
        let composite = components.iter().map(|(_, v)| v).sum();
        let report = genest(&run, &params, &riesz)?;
        let (drift, q0) = run.conservation_drift(&params);
        Ok(StudyRow {
            param: value,
            composite,
            components,
            diagnostics,
            conservation_drift: drift,
            conserved_initial: q0,
            genest_aggregate: report.aggregate,
            genest_ratio: report.ratio,
            newton_quadratic_constant: run.newton_quadratic_constant(),
        })
    };
    let rows = runner
        .map(&cfg.values, job)
        .into_iter()
        .zip(&cfg.values)
        .map(|(r, &v)| r.map_err(wrap(v)))
        .collect::<Result<Vec<_>>>()?;

    let fit = fit_rate(&rows.iter().map(|r| (r.param, r.composite)).collect::<Vec<_>>())?;
    let (within_hypotheses, notes) = cfg.hypotheses();
    let (fixed_name, fixed_value) = cfg.kind.fixed();
    Ok(StudyResult {
        swept: cfg.kind.swept_name(),
        fixed_name,
        fixed_value,
        rows,
        fit,
        reference: ReferenceInfo {
            param: cfg.reference,
            steps: reference.len() - 1,
            conservation_drift: ref_drift,
            conserved_initial: ref_q0,
            genest_aggregate: ref_report.aggregate,
            genest_ratio: ref_report.ratio,
        },
        within_hypotheses,
        notes,
    })
}

type Named = Vec<(String, f64)>;

fn named(items: &[(&str, f64)]) -> Named {
    items.iter().map(|&(k, v)| (String::from(k), v)).collect()
}

/// Spatial norms of `member − reference` at every shared sample.
fn gap_series(
    run: &Trajectory,
    reference: &Trajectory,
    pick: impl Fn(&State) -> Result<Field>,
    norm: impl Fn(&Field) -> Result<f64>,
) -> Result<Vec<f64>> {
    if run.len() != reference.len() {
        return Err(Error::InvalidConfig("member and reference sample counts differ".into()));
    }
    run.states
        .iter()
        .zip(&reference.states)
        .map(|(a, b)| norm(&(&pick(a)? - &pick(b)?)))
        .collect()
}

fn h(f: &Field) -> Result<f64> {
    Ok(norm_h(f))
}

fn v(f: &Field) -> Result<f64> {
    Ok(norm_v(f))
}

fn beta_errors(run: &Trajectory, reference: &Trajectory, alpha: f64, riesz: &RieszOperator) -> Result<(Named, Named)> {
    let dt = run.dt;
    let mu = |s: &State| Ok(s.mu.clone());
    let phi = |s: &State| Ok(s.phi.clone());
    let sigma = |s: &State| Ok(s.sigma.clone());
    let combo = |s: &State| Field::lincomb(alpha, &s.mu, 1.0, &(&s.phi + &s.sigma));
    let dual = |f: &Field| riesz.dual_norm(f);

    let components = named(&[
        ("mu_l2_h", time_l2(&gap_series(run, reference, mu, h)?, dt)),
        ("phi_l2_v", time_l2(&gap_series(run, reference, phi, v)?, dt)),
        ("sigma_linf_h", time_linf(&gap_series(run, reference, sigma, h)?)),
        ("sigma_l2_v", time_l2(&gap_series(run, reference, sigma, v)?, dt)),
        ("conserved_combination_linf_vstar", time_linf(&gap_series(run, reference, combo, dual)?)),
    ]);
    let diagnostics = named(&[
        ("mu_linf_vstar", time_linf(&gap_series(run, reference, mu, dual)?)),
        ("phi_linf_vstar", time_linf(&gap_series(run, reference, phi, dual)?)),
        ("sigma_linf_vstar", time_linf(&gap_series(run, reference, sigma, dual)?)),
    ]);
    Ok((components, diagnostics))
}

fn alpha_errors(run: &Trajectory, reference: &Trajectory) -> Result<Named> {
    let dt = run.dt;
    let mu = |s: &State| Ok(s.mu.clone());
    let phi = |s: &State| Ok(s.phi.clone());
    let sigma = |s: &State| Ok(s.sigma.clone());
    Ok(named(&[
        ("mu_l2_v", time_l2(&gap_series(run, reference, mu, v)?, dt)),
        ("phi_linf_h", time_linf(&gap_series(run, reference, phi, h)?)),
        ("phi_l2_v", time_l2(&gap_series(run, reference, phi, v)?, dt)),
        ("sigma_linf_h", time_linf(&gap_series(run, reference, sigma, h)?)),
        ("sigma_l2_v", time_l2(&gap_series(run, reference, sigma, v)?, dt)),
    ]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn small(kind: SweepKind) -> SweepConfig {
        let mut cfg = SweepConfig::new(kind);
        cfg.grid = Grid::line(16).unwrap();
        cfg.final_time = 0.02;
        cfg.solver.dt = 5e-3;
        cfg.values = vec![1e-1, 1e-2, 1e-3];
        cfg
    }

    #[test]
    fn zero_in_values_is_rejected() {
        let mut cfg = small(SweepKind::Beta { alpha: 0.05 });
        cfg.values = vec![1e-1, 1e-2, 0.0];
        assert!(matches!(sweep_beta(&cfg), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn increasing_values_are_rejected() {
        let mut cfg = small(SweepKind::Beta { alpha: 0.05 });
        cfg.values = vec![1e-3, 1e-2, 1e-1];
        assert!(matches!(cfg.validate(), Err(Error::InvalidConfig(_))));
    }

    #[test]
    fn alpha_sweep_rejects_state_dependent_growth() {
        let mut cfg = small(SweepKind::Alpha { beta: 0.5 });
        cfg.proliferation = Proliferation::ClippedSqrtF { scale: 1.0 };
        match sweep_alpha(&cfg) {
            Err(Error::HypothesisViolation(msg)) => assert!(msg.contains("p is a nonnegative constant")),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn logarithmic_alpha_sweep_is_labelled() {
        let mut cfg = small(SweepKind::Alpha { beta: 0.5 });
        cfg.potential = PotentialSpec::logarithmic(2.0).unwrap();
        let (ok, notes) = cfg.hypotheses();
        assert!(!ok);
        assert!(notes[0].contains("outside hypotheses"));
    }

    #[test]
    fn small_beta_sweep_runs() {
        let cfg = small(SweepKind::Beta { alpha: 0.05 });
        let res = sweep_beta(&cfg).unwrap();
        assert_eq!(res.rows.len(), 3);
        assert!(res.within_hypotheses);
        assert!(res.rows.iter().all(|r| r.composite > 0.0 && r.composite.is_finite()));
        assert_eq!(res.rows[0].components.len(), 5);
        assert_eq!(res.reference.steps, 4);
    }

    #[test]
    fn kind_mismatch() {
        let cfg = small(SweepKind::Beta { alpha: 0.05 });
        assert!(sweep_alpha(&cfg).is_err());
    }
}
