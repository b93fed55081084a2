use alloc::vec::Vec;

use crate::discretization::{bochner_norm, norm_h, BochnerKind, Field, Grid};
use crate::error::{Error, Result};
use crate::math;
use crate::potentials::{PotentialSpec, Proliferation, DEFAULT_EPSILON};
use crate::solver::{residual, ModelParams, Residuals, State, Trajectory};

/// Setup for the spatially constant solutions `μ = −Lψ(t)`, `φ = ψ(t)`,
/// `σ = ξ = 0` of the `β = 0` problem with `p ≡ 0` and zero data.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct NonUniquenessConfig {
    /// Lipschitz constant of `π(r) = −Lr` on `[−1, 1]`.
    pub lipschitz: f64,
    /// Must equal `1 / lipschitz`.
    pub alpha: f64,
    pub grid: Grid,
    pub dt: f64,
    pub final_time: f64,
}

impl NonUniquenessConfig {
    /// `α = 1/L` on a 1D grid of 32 cells, `dt = 1e-2`, `T = 1`.
    pub fn new(lipschitz: f64) -> Self {
        NonUniquenessConfig {
            lipschitz,
            alpha: 1.0 / lipschitz,
            grid: Grid::line(32).expect("valid grid"),
            dt: 1e-2,
            final_time: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.lipschitz.is_finite() && self.lipschitz > 1.0) {
            return Err(Error::InvalidConfig(
                "nonuniq.lipschitz must exceed 1 so that alpha = 1/L lies in (0, 1)".into(),
            ));
        }
        if (self.alpha * self.lipschitz - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(
                "the construction provides a solution only if alpha * L = 1".into(),
            ));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::InvalidConfig("nonuniq.dt must be positive".into()));
        }
        if !(self.final_time.is_finite() && self.final_time > 0.0) {
            return Err(Error::InvalidConfig("nonuniq.final_time must be positive".into()));
        }
        Ok(())
    }

    /// `β = 0`, `p ≡ 0`, `γ = 1`, obstacle potential with the exact graph.
    pub fn params(&self) -> Result<ModelParams> {
        Ok(ModelParams {
            alpha: self.alpha,
            beta: 0.0,
            gamma: 1.0,
            potential: PotentialSpec::linear_obstacle(self.lipschitz, DEFAULT_EPSILON)?,
            proliferation: Proliferation::Constant(0.0),
            final_time: self.final_time,
        })
    }

    fn times(&self) -> Vec<f64> {
        let steps = math::ceil(self.final_time / self.dt - 1e-9) as usize;
        (0..=steps)
            .map(|k| if k == steps { self.final_time } else { k as f64 * self.dt })
            .collect()
    }
}

/// Residual audit of one candidate.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct CandidateReport {
    /// Componentwise maximum over all transitions.
    pub max_residuals: Residuals,
    /// `‖(αμ + φ)(0)‖ + ‖σ(0)‖` against the zero data.
    pub initial_mismatch: f64,
    /// Whether `ξ ∈ B(φ)` holds for the exact indicator graph at every sample.
    pub selection_admissible: bool,
    pub steps: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct NonUniquenessReport {
    pub lipschitz: f64,
    pub alpha: f64,
    pub a: CandidateReport,
    pub b: CandidateReport,
    /// `‖φ_a − φ_b‖_{L²(0,T;H)}`.
    pub separation: f64,
}

/// Samples the candidate generated by `psi` at `t_k = k·dt`.
pub fn candidate_trajectory(cfg: &NonUniquenessConfig, psi: &dyn Fn(f64) -> f64) -> Result<Trajectory> {
    cfg.validate()?;
    let grid = cfg.grid;
    let states = cfg
        .times()
        .into_iter()
        .map(|t| {
            let value = psi(t);
            if !(value.is_finite() && value.abs() <= 1.0) {
                return Err(Error::Domain {
                    what: "psi must stay in [-1, 1]",
                    value,
                });
            }
            State::with_selection(
                Field::constant(grid, -cfg.lipschitz * value),
                Field::constant(grid, value),
                Field::zeros(grid),
                Field::zeros(grid),
                t,
            )
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Trajectory {
        states,
        dt: cfg.dt,
        stats: Vec::new(),
    })
}

fn audit(traj: &Trajectory, params: &ModelParams) -> Result<CandidateReport> {
    let mut max = Residuals {
        balance: 0.0,
        potential: 0.0,
        nutrient: 0.0,
    };
    for w in traj.states.windows(2) {
        let r = residual(&w[0], &w[1], params, w[1].t - w[0].t)?;
        max.balance = max.balance.max(r.balance);
        max.potential = max.potential.max(r.potential);
        max.nutrient = max.nutrient.max(r.nutrient);
    }
    let first = &traj.states[0];
    let combo = Field::lincomb(params.alpha, &first.mu, 1.0, &first.phi)?;
    let initial_mismatch = norm_h(&combo) + norm_h(&first.sigma);
    let selection_admissible = traj.states.iter().all(|s| {
        s.phi
            .values()
            .iter()
            .zip(s.xi.values())
            .all(|(&r, &x)| params.potential.graph_contains(r, x, 0.0))
    });
    Ok(CandidateReport {
        max_residuals: max,
        initial_mismatch,
        selection_admissible,
        steps: traj.len() - 1,
    })
}

/// Builds and audits two candidates; both solve the same problem when `αL = 1`.
pub fn nonuniqueness_demo(
    cfg: &NonUniquenessConfig,
    psi_a: &dyn Fn(f64) -> f64,
    psi_b: &dyn Fn(f64) -> f64,
) -> Result<NonUniquenessReport> {
    let params = cfg.params()?;
    let ta = candidate_trajectory(cfg, psi_a)?;
    let tb = candidate_trajectory(cfg, psi_b)?;
    let gaps: Vec<Field> = ta.states.iter().zip(&tb.states).map(|(a, b)| &a.phi - &b.phi).collect();
    Ok(NonUniquenessReport {
        lipschitz: cfg.lipschitz,
        alpha: cfg.alpha,
        a: audit(&ta, &params)?,
        b: audit(&tb, &params)?,
        separation: bochner_norm(&gaps, cfg.dt, BochnerKind::L2H)?,
    })
}
