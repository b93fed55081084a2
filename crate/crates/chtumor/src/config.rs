//! TOML run configuration.
//!
//! A file is parsed into [`RunConfig`] with unknown keys rejected, defaults
//! from [`crate::defaults`] filled in, and every violation collected before
//! reporting. The filled-in form is what runs and what gets echoed; writing it
//! back with [`RunConfig::to_toml`] and reparsing yields the same value.

use std::path::Path;

use chtumor_core::discretization::Grid;
use chtumor_core::potentials::{PotentialSpec, Proliferation};
use chtumor_core::solver::{ModelParams, SolverConfig};
use chtumor_core::studies::{InitialData, ManufacturedSolution, NonUniquenessConfig, Profile, SweepConfig, SweepKind};
use serde::{Deserialize, Serialize};

use crate::defaults as d;
use crate::error::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Simulate,
    SweepBeta,
    SweepAlpha,
    Nonuniq,
    Manufactured,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Simulate => "simulate",
            Command::SweepBeta => "sweep-beta",
            Command::SweepAlpha => "sweep-alpha",
            Command::Nonuniq => "nonuniq",
            Command::Manufactured => "manufactured",
        }
    }

    /// Keys without a default that this command cannot run without.
    fn required(self) -> &'static [&'static str] {
        match self {
            Command::Simulate => &["model.alpha", "model.beta", "model.final_time"],
            Command::SweepBeta => &["model.alpha", "model.final_time"],
            Command::SweepAlpha => &["model.beta", "model.final_time"],
            Command::Nonuniq => &["nonuniq.lipschitz"],
            Command::Manufactured => &["model.alpha", "model.beta"],
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    DoubleWell,
    Logarithmic,
    RegularizedIndicator,
    LinearObstacle,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GrowthKind {
    Constant,
    ClippedSqrtF,
    SmoothBump,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Json,
    Csv,
    Both,
}

impl Format {
    pub fn json(self) -> bool {
        matches!(self, Format::Json | Format::Both)
    }

    pub fn csv(self) -> bool {
        matches!(self, Format::Csv | Format::Both)
    }
}

/// Time profile of a non-uniqueness candidate.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum Psi {
    Constant { value: f64 },
    /// `amplitude · sin(frequency · t)` clipped to `[−1, 1]`.
    Sine { amplitude: f64, frequency: f64 },
}

impl Psi {
    pub fn eval(&self, t: f64) -> f64 {
        match *self {
            Psi::Constant { value } => value,
            Psi::Sine { amplitude, frequency } => (amplitude * (frequency * t).sin()).clamp(-1.0, 1.0),
        }
    }
}

macro_rules! section {
    ($(#[$meta:meta])* $name:ident { $($field:ident : $ty:ty),* $(,)? }) => {
        $(#[$meta])*
        #[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
        #[serde(deny_unknown_fields)]
        pub struct $name {
            $(
                #[serde(default, skip_serializing_if = "Option::is_none")]
                pub $field: Option<$ty>,
            )*
        }
    };
}

section!(ModelSection { alpha: f64, beta: f64, gamma: f64, final_time: f64 });
section!(PotentialSection { family: Family, kappa: f64, epsilon: f64, lipschitz: f64 });
section!(ProliferationSection {
    kind: GrowthKind,
    value: f64,
    scale: f64,
    center: f64,
    width: f64,
    height: f64,
});
section!(GridSection { dim: usize, n: usize, extent: f64 });
section!(SolverSection {
    dt: f64,
    newton_tol: f64,
    newton_max: usize,
    damping: f64,
    max_halvings: usize,
    lin_tol: f64,
});
section!(
    /// `mean + amplitude · cos(mode · π · x / extent)` per coordinate.
    ProfileSection { mean: f64, amplitude: f64, mode: u32 }
);
section!(InitialSection { mu: ProfileSection, phi: ProfileSection, sigma: ProfileSection });
section!(SweepSection { values: Vec<f64>, reference: f64 });
section!(NonuniqSection { lipschitz: f64, alpha: f64, final_time: f64, psi_a: Psi, psi_b: Psi });
section!(SolutionSection { decay: f64, mu: [f64; 2], phi: [f64; 2], sigma: [f64; 2] });
section!(ManufacturedSection {
    solution: SolutionSection,
    spatial_n: Vec<usize>,
    spatial_dt: f64,
    spatial_final_time: f64,
    temporal_n: usize,
    temporal_dt: Vec<f64>,
    temporal_final_time: f64,
});
section!(OutputSection { dir: String, format: Format, checkpoint_every: usize });

/// One configuration file; after [`parse_config`] every defaultable key is set.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub potential: PotentialSection,
    #[serde(default)]
    pub proliferation: ProliferationSection,
    #[serde(default)]
    pub grid: GridSection,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub initial: InitialSection,
    #[serde(default)]
    pub sweep: SweepSection,
    #[serde(default)]
    pub nonuniq: NonuniqSection,
    #[serde(default)]
    pub manufactured: ManufacturedSection,
    #[serde(default)]
    pub output: OutputSection,
}

pub fn parse_config(path: &Path, command: Command) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(format!("cannot read {}", path.display()), e))?;
    parse_config_str(&text, command).map_err(|e| match e {
        CliError::Parse { message, .. } => CliError::Parse {
            path: path.to_path_buf(),
            message,
        },
        other => other,
    })
}

pub fn parse_config_str(text: &str, command: Command) -> Result<RunConfig> {
    let mut cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Parse {
        path: "<inline>".into(),
        message: e.message().to_string(),
    })?;
    cfg.fill_defaults();
    let problems = cfg.violations(command);
    if problems.is_empty() {
        Ok(cfg)
    } else {
        Err(CliError::Config(problems))
    }
}

/// Text of a core error without the generic prefix; the list already says it is a configuration problem.
fn message(e: chtumor_core::Error) -> String {
    match e {
        chtumor_core::Error::InvalidConfig(m) => m,
        other => other.to_string(),
    }
}

fn profile_default(section: &mut ProfileSection, (mean, amplitude, mode): (f64, f64, u32)) {
    section.mean.get_or_insert(mean);
    section.amplitude.get_or_insert(amplitude);
    section.mode.get_or_insert(mode);
}

impl RunConfig {
    fn fill_defaults(&mut self) {
        self.model.gamma.get_or_insert(d::GAMMA);

        let family = *self.potential.family.get_or_insert(Family::DoubleWell);
        match family {
            Family::Logarithmic => {
                self.potential.kappa.get_or_insert(d::KAPPA);
            }
            Family::RegularizedIndicator | Family::LinearObstacle => {
                self.potential.epsilon.get_or_insert(d::EPSILON);
            }
            Family::DoubleWell => {}
        }

        match *self.proliferation.kind.get_or_insert(GrowthKind::Constant) {
            GrowthKind::Constant => {
                self.proliferation.value.get_or_insert(d::PROLIFERATION);
            }
            GrowthKind::ClippedSqrtF => {
                self.proliferation.scale.get_or_insert(d::PROLIFERATION);
            }
            GrowthKind::SmoothBump => {}
        }

        self.grid.dim.get_or_insert(d::GRID_DIM);
        self.grid.n.get_or_insert(d::GRID_N);
        self.grid.extent.get_or_insert(d::GRID_EXTENT);

        let s = &mut self.solver;
        s.dt.get_or_insert(d::DT);
        s.newton_tol.get_or_insert(d::NEWTON_TOL);
        s.newton_max.get_or_insert(d::NEWTON_MAX);
        s.damping.get_or_insert(d::DAMPING);
        s.max_halvings.get_or_insert(d::MAX_HALVINGS);
        s.lin_tol.get_or_insert(d::LIN_TOL);

        profile_default(self.initial.mu.get_or_insert_with(Default::default), d::INITIAL_MU);
        profile_default(self.initial.phi.get_or_insert_with(Default::default), d::INITIAL_PHI);
        profile_default(self.initial.sigma.get_or_insert_with(Default::default), d::INITIAL_SIGMA);

        self.sweep.values.get_or_insert_with(|| d::SWEEP_VALUES.to_vec());
        self.sweep.reference.get_or_insert(d::SWEEP_REFERENCE);

        let nu = &mut self.nonuniq;
        if let (Some(l), None) = (nu.lipschitz, nu.alpha) {
            nu.alpha = Some(1.0 / l);
        }
        nu.final_time.get_or_insert(d::NONUNIQ_FINAL_TIME);
        nu.psi_a.get_or_insert(Psi::Constant { value: d::NONUNIQ_PSI_A });
        nu.psi_b.get_or_insert(Psi::Constant { value: d::NONUNIQ_PSI_B });

        let m = &mut self.manufactured;
        let exact = ManufacturedSolution::decaying_cosine();
        let sol = m.solution.get_or_insert_with(Default::default);
        sol.decay.get_or_insert(exact.decay);
        sol.mu.get_or_insert(exact.mu);
        sol.phi.get_or_insert(exact.phi);
        sol.sigma.get_or_insert(exact.sigma);
        m.spatial_n.get_or_insert_with(|| d::MANUFACTURED_SPATIAL_N.to_vec());
        m.spatial_dt.get_or_insert(d::MANUFACTURED_SPATIAL_DT);
        m.spatial_final_time.get_or_insert(d::MANUFACTURED_SPATIAL_FINAL_TIME);
        m.temporal_n.get_or_insert(d::MANUFACTURED_TEMPORAL_N);
        m.temporal_dt.get_or_insert_with(|| d::MANUFACTURED_TEMPORAL_DT.to_vec());
        m.temporal_final_time.get_or_insert(d::MANUFACTURED_TEMPORAL_FINAL_TIME);

        self.output.dir.get_or_insert_with(|| d::OUTPUT_DIR.to_string());
        self.output.format.get_or_insert(Format::Both);
        self.output.checkpoint_every.get_or_insert(d::CHECKPOINT_EVERY);
    }

    fn has(&self, key: &str) -> bool {
        match key {
            "model.alpha" => self.model.alpha.is_some(),
            "model.beta" => self.model.beta.is_some(),
            "model.final_time" => self.model.final_time.is_some(),
            "nonuniq.lipschitz" => self.nonuniq.lipschitz.is_some(),
            _ => unreachable!("unknown required key {key}"),
        }
    }

    /// All problems with this configuration for `command`.
    fn violations(&self, command: Command) -> Vec<String> {
        let mut out: Vec<String> = command
            .required()
            .iter()
            .filter(|k| !self.has(k))
            .map(|k| format!("missing required key {k} for `{}`", command.name()))
            .collect();
        let mut check = |r: std::result::Result<(), String>| {
            if let Err(m) = r {
                out.push(m);
            }
        };
        let core = |r: chtumor_core::Result<()>| r.map_err(message);

        // checked on their own so a bad value shows up even when a sibling key is missing
        let m = &self.model;
        for (key, v) in [("alpha", m.alpha), ("beta", m.beta)] {
            if v.is_some_and(|v| !(v.is_finite() && (0.0..1.0).contains(&v))) {
                check(Err(format!("model.{key} must lie in [0, 1)")));
            }
        }
        if m.final_time.is_some_and(|v| !(v.is_finite() && v >= 0.0)) {
            check(Err("model.final_time must be nonnegative".into()));
        }

        match command {
            Command::SweepBeta if self.model.beta.is_some() => {
                check(Err("model.beta is swept by `sweep-beta`; list its values in sweep.values".into()))
            }
            Command::SweepAlpha if self.model.alpha.is_some() => {
                check(Err("model.alpha is swept by `sweep-alpha`; list its values in sweep.values".into()))
            }
            _ => {}
        }

        if command != Command::Nonuniq {
            check(core(self.potential().map(|_| ())));
            check(self.proliferation().map(|_| ()));
        }
        check(core(self.grid().map(|_| ())));
        check(core(self.solver_config().validate()));
        if let Some(every) = self.output.checkpoint_every {
            if command == Command::Simulate && every > 0 && self.model.final_time.is_none() {
                check(Err("output.checkpoint_every needs model.final_time".into()));
            }
        }

        match command {
            Command::Simulate => {
                if let Ok(p) = self.model_params() {
                    check(core(p.validate()));
                }
            }
            Command::SweepBeta | Command::SweepAlpha => {
                if let Ok(cfg) = self.sweep_config(command) {
                    check(core(cfg.validate()));
                }
            }
            Command::Nonuniq => {
                if let Ok(cfg) = self.nonuniq_config() {
                    check(core(cfg.validate()));
                    for (name, psi) in [("psi_a", self.nonuniq.psi_a), ("psi_b", self.nonuniq.psi_b)] {
                        if let Some(Psi::Constant { value }) = psi {
                            if !(value.abs() <= 1.0) {
                                check(Err(format!("nonuniq.{name} must stay in [-1, 1]")));
                            }
                        }
                    }
                }
            }
            Command::Manufactured => {
                if let Ok(p) = self.model_params_at(0.0) {
                    check(core(p.validate()));
                }
                let m = &self.manufactured;
                let spatial = m.spatial_n.as_deref().unwrap_or_default();
                if spatial.is_empty() || m.temporal_dt.as_deref().unwrap_or_default().is_empty() {
                    check(Err("manufactured levels must not be empty".into()));
                }
                if spatial.iter().any(|&n| n < 4) || m.temporal_n.is_some_and(|n| n < 4) {
                    check(Err("manufactured grid sizes must be at least 4".into()));
                }
                for (key, v) in [
                    ("spatial_dt", m.spatial_dt),
                    ("spatial_final_time", m.spatial_final_time),
                    ("temporal_final_time", m.temporal_final_time),
                ] {
                    if !v.is_some_and(|v| v.is_finite() && v > 0.0) {
                        check(Err(format!("manufactured.{key} must be positive")));
                    }
                }
                if m.temporal_dt.iter().flatten().any(|&v| !(v.is_finite() && v > 0.0)) {
                    check(Err("manufactured.temporal_dt entries must be positive".into()));
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        out.retain(|m| seen.insert(m.clone()));
        out
    }

    pub fn potential(&self) -> chtumor_core::Result<PotentialSpec> {
        let p = &self.potential;
        match p.family.unwrap_or(Family::DoubleWell) {
            Family::DoubleWell => Ok(PotentialSpec::double_well()),
            Family::Logarithmic => PotentialSpec::logarithmic(p.kappa.unwrap_or(d::KAPPA)),
            Family::RegularizedIndicator => PotentialSpec::regularized_indicator(p.epsilon.unwrap_or(d::EPSILON)),
            Family::LinearObstacle => match p.lipschitz {
                Some(l) => PotentialSpec::linear_obstacle(l, p.epsilon.unwrap_or(d::EPSILON)),
                None => Err(chtumor_core::Error::InvalidConfig(
                    "potential.lipschitz is required for the linear_obstacle family".into(),
                )),
            },
        }
    }

    pub fn proliferation(&self) -> std::result::Result<Proliferation, String> {
        let p = &self.proliferation;
        let growth = match p.kind.unwrap_or(GrowthKind::Constant) {
            GrowthKind::Constant => Proliferation::Constant(p.value.unwrap_or(d::PROLIFERATION)),
            GrowthKind::ClippedSqrtF => Proliferation::ClippedSqrtF {
                scale: p.scale.unwrap_or(d::PROLIFERATION),
            },
            GrowthKind::SmoothBump => match (p.center, p.width, p.height) {
                (Some(center), Some(width), Some(height)) => Proliferation::SmoothBump { center, width, height },
                _ => {
                    return Err("proliferation.center, width and height are required for smooth_bump".into());
                }
            },
        };
        growth.validate().map_err(message)?;
        Ok(growth)
    }

    pub fn grid(&self) -> chtumor_core::Result<Grid> {
        let g = &self.grid;
        Grid::new(
            g.dim.unwrap_or(d::GRID_DIM),
            g.n.unwrap_or(d::GRID_N),
            g.extent.unwrap_or(d::GRID_EXTENT),
        )
    }

    fn grid_with(&self, n: usize) -> chtumor_core::Result<Grid> {
        Grid::new(self.grid.dim.unwrap_or(d::GRID_DIM), n, self.grid.extent.unwrap_or(d::GRID_EXTENT))
    }

    pub fn solver_config(&self) -> SolverConfig {
        let s = &self.solver;
        SolverConfig {
            dt: s.dt.unwrap_or(d::DT),
            newton_tol: s.newton_tol.unwrap_or(d::NEWTON_TOL),
            newton_max: s.newton_max.unwrap_or(d::NEWTON_MAX),
            damping: s.damping.unwrap_or(d::DAMPING),
            max_halvings: s.max_halvings.unwrap_or(d::MAX_HALVINGS),
            lin_tol: s.lin_tol.unwrap_or(d::LIN_TOL),
        }
    }

    pub fn initial(&self) -> InitialData {
        let profile = |s: &Option<ProfileSection>, (mean, amplitude, mode): (f64, f64, u32)| {
            let s = s.clone().unwrap_or_default();
            Profile::new(s.mean.unwrap_or(mean), s.amplitude.unwrap_or(amplitude), s.mode.unwrap_or(mode))
        };
        InitialData {
            mu: profile(&self.initial.mu, d::INITIAL_MU),
            phi: profile(&self.initial.phi, d::INITIAL_PHI),
            sigma: profile(&self.initial.sigma, d::INITIAL_SIGMA),
        }
    }

    fn shared(&self) -> std::result::Result<(PotentialSpec, Proliferation), String> {
        Ok((self.potential().map_err(message)?, self.proliferation()?))
    }

    pub fn model_params(&self) -> std::result::Result<ModelParams, String> {
        let final_time = self.model.final_time.ok_or("model.final_time is missing")?;
        self.model_params_at(final_time)
    }

    fn model_params_at(&self, final_time: f64) -> std::result::Result<ModelParams, String> {
        let (potential, proliferation) = self.shared()?;
        Ok(ModelParams {
            alpha: self.model.alpha.ok_or("model.alpha is missing")?,
            beta: self.model.beta.ok_or("model.beta is missing")?,
            gamma: self.model.gamma.unwrap_or(d::GAMMA),
            potential,
            proliferation,
            final_time,
        })
    }

    pub fn sweep_config(&self, command: Command) -> std::result::Result<SweepConfig, String> {
        let kind = match command {
            Command::SweepBeta => SweepKind::Beta {
                alpha: self.model.alpha.ok_or("model.alpha is missing")?,
            },
            Command::SweepAlpha => SweepKind::Alpha {
                beta: self.model.beta.ok_or("model.beta is missing")?,
            },
            _ => return Err(format!("`{}` is not a sweep", command.name())),
        };
        let (potential, proliferation) = self.shared()?;
        Ok(SweepConfig {
            kind,
            values: self.sweep.values.clone().unwrap_or_else(|| d::SWEEP_VALUES.to_vec()),
            reference: self.sweep.reference.unwrap_or(d::SWEEP_REFERENCE),
            grid: self.grid().map_err(message)?,
            final_time: self.model.final_time.ok_or("model.final_time is missing")?,
            gamma: self.model.gamma.unwrap_or(d::GAMMA),
            potential,
            proliferation,
            initial: self.initial(),
            solver: self.solver_config(),
        })
    }

    pub fn nonuniq_config(&self) -> std::result::Result<NonUniquenessConfig, String> {
        let lipschitz = self.nonuniq.lipschitz.ok_or("nonuniq.lipschitz is missing")?;
        Ok(NonUniquenessConfig {
            lipschitz,
            alpha: self.nonuniq.alpha.unwrap_or(1.0 / lipschitz),
            grid: self.grid().map_err(message)?,
            dt: self.solver_config().dt,
            final_time: self.nonuniq.final_time.unwrap_or(d::NONUNIQ_FINAL_TIME),
        })
    }

    pub fn psi(&self) -> (Psi, Psi) {
        (
            self.nonuniq.psi_a.unwrap_or(Psi::Constant { value: d::NONUNIQ_PSI_A }),
            self.nonuniq.psi_b.unwrap_or(Psi::Constant { value: d::NONUNIQ_PSI_B }),
        )
    }

    pub fn manufactured_solution(&self) -> ManufacturedSolution {
        let exact = ManufacturedSolution::decaying_cosine();
        let s = self.manufactured.solution.clone().unwrap_or_default();
        ManufacturedSolution {
            decay: s.decay.unwrap_or(exact.decay),
            mu: s.mu.unwrap_or(exact.mu),
            phi: s.phi.unwrap_or(exact.phi),
            sigma: s.sigma.unwrap_or(exact.sigma),
        }
    }

    /// `(params, levels)` for the spatial and the temporal refinement.
    #[allow(clippy::type_complexity)]
    pub fn manufactured_levels(
        &self,
    ) -> std::result::Result<((ModelParams, Vec<(Grid, f64)>), (ModelParams, Vec<(Grid, f64)>)), String> {
        let m = &self.manufactured;
        let spatial_dt = m.spatial_dt.unwrap_or(d::MANUFACTURED_SPATIAL_DT);
        let spatial = m
            .spatial_n
            .clone()
            .unwrap_or_else(|| d::MANUFACTURED_SPATIAL_N.to_vec())
            .into_iter()
            .map(|n| self.grid_with(n).map(|g| (g, spatial_dt)))
            .collect::<chtumor_core::Result<Vec<_>>>()
            .map_err(message)?;
        let fine = self
            .grid_with(m.temporal_n.unwrap_or(d::MANUFACTURED_TEMPORAL_N))
            .map_err(message)?;
        let temporal = m
            .temporal_dt
            .clone()
            .unwrap_or_else(|| d::MANUFACTURED_TEMPORAL_DT.to_vec())
            .into_iter()
            .map(|dt| (fine, dt))
            .collect();
        Ok((
            (
                self.model_params_at(m.spatial_final_time.unwrap_or(d::MANUFACTURED_SPATIAL_FINAL_TIME))?,
                spatial,
            ),
            (
                self.model_params_at(m.temporal_final_time.unwrap_or(d::MANUFACTURED_TEMPORAL_FINAL_TIME))?,
                temporal,
            ),
        ))
    }

    pub fn format(&self) -> Format {
        self.output.format.unwrap_or(Format::Both)
    }

    pub fn output_dir(&self) -> &str {
        self.output.dir.as_deref().unwrap_or(d::OUTPUT_DIR)
    }

    /// The effective configuration as TOML.
    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| CliError::Serialize(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BETA_SWEEP: &str = r#"
        [model]
        alpha = 0.05
        final_time = 0.5

        [solver]
        dt = 5e-4
    "#;

    #[test]
    fn defaults_are_filled() {
        let cfg = parse_config_str(BETA_SWEEP, Command::SweepBeta).unwrap();
        assert_eq!(cfg.model.gamma, Some(1.0));
        assert_eq!(cfg.grid.n, Some(128));
        assert_eq!(cfg.sweep.values.as_deref(), Some(&d::SWEEP_VALUES[..]));
        let sweep = cfg.sweep_config(Command::SweepBeta).unwrap();
        assert_eq!(sweep, {
            let mut s = SweepConfig::beta_sweep(0.05);
            s.solver.dt = 5e-4;
            s
        });
    }

    #[test]
    fn effective_config_round_trips() {
        for (text, cmd) in [
            (BETA_SWEEP, Command::SweepBeta),
            ("[nonuniq]\nlipschitz = 2.0\npsi_a = { kind = \"sine\", amplitude = 1.0, frequency = 1.0 }\n", Command::Nonuniq),
            ("[model]\nalpha = 0.5\nbeta = 0.5\n[potential]\nfamily = \"logarithmic\"\n", Command::Manufactured),
        ] {
            let cfg = parse_config_str(text, cmd).unwrap();
            let again = parse_config_str(&cfg.to_toml().unwrap(), cmd).unwrap();
            assert_eq!(cfg, again);
        }
    }

    #[test]
    fn every_violation_is_reported() {
        let text = "[model]\nbeta = 2.0\n[grid]\nn = 2\n";
        match parse_config_str(text, Command::Simulate) {
            Err(CliError::Config(list)) => {
                assert!(list.iter().any(|m| m.contains("model.alpha")));
                assert!(list.iter().any(|m| m.contains("model.final_time")));
                assert!(list.iter().any(|m| m.contains("grid.n")), "{list:?}");
                assert!(list.iter().any(|m| m.contains("model.beta must lie")), "{list:?}");
                assert_eq!(list.len(), 4, "{list:?}");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(matches!(
            parse_config_str("[model]\nalpah = 0.1\n", Command::Simulate),
            Err(CliError::Parse { .. })
        ));
    }

    #[test]
    fn alpha_sweep_with_a_bump_cites_the_hypothesis() {
        let text = r#"
            [model]
            beta = 0.5
            final_time = 0.5
            [proliferation]
            kind = "smooth_bump"
            center = 0.0
            width = 0.3
            height = 1.0
        "#;
        match parse_config_str(text, Command::SweepAlpha) {
            Err(CliError::Config(list)) => {
                assert!(list.iter().any(|m| m.contains("p is a nonnegative constant")), "{list:?}")
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn sweep_beta_rejects_a_fixed_beta() {
        let text = format!("{BETA_SWEEP}\n[sweep]\nvalues = [0.1, 0.01, 0.001]\n");
        let text = text.replace("alpha = 0.05", "alpha = 0.05\nbeta = 0.1");
        assert!(matches!(parse_config_str(&text, Command::SweepBeta), Err(CliError::Config(_))));
    }

    #[test]
    fn nonuniq_off_threshold() {
        match parse_config_str("[nonuniq]\nlipschitz = 2.0\nalpha = 0.3\n", Command::Nonuniq) {
            Err(CliError::Config(list)) => assert!(list.iter().any(|m| m.contains("alpha * L = 1"))),
            other => panic!("{other:?}"),
        }
    }
}
