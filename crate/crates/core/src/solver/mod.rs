//! Fully implicit time integration of the coupled `(μ, φ, σ)` system.
//!
//! Each step is backward Euler with every term at the new time level and a
//! monolithic damped Newton iteration over the three fields. The same
//! machinery covers the viscous problem and both limits: `β = 0` turns the
//! second equation into the elliptic relation `μ = −Δφ + ξ + π(φ)` and
//! `α = 0` drops the mass term on `μ` in the first equation.
//!
//! The proliferation coupling `R = p(φ)(σ − γμ)` enters the first and third
//! equations through one shared expression, so `∫(αμ + φ + σ)` is preserved
//! by every step up to the Newton residual.

mod diagnostics;
mod newton;

use alloc::vec::Vec;

pub use diagnostics::{conserved_quantity, energy, energy_check, genest, EnergyReport, GenEstReport};
pub use newton::{residual, solve, solve_forced, step, step_forced, Forcing, Residuals, StepStats};

use crate::discretization::{Field, Grid};
use crate::error::{Error, Result};
use crate::potentials::{PotentialSpec, Proliferation};

/// Largest number of time steps a single solve may take.
pub const MAX_STEPS: usize = 10_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub potential: PotentialSpec,
    pub proliferation: Proliferation,
    pub final_time: f64,
}

/// Which of the three problems a parameter set describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// `α, β > 0`.
    Viscous,
    /// `β = 0`, `α > 0`.
    BetaLimit,
    /// `α = 0`, `β > 0`.
    AlphaLimit,
}

impl ModelParams {
    pub fn validate(&self) -> Result<()> {
        let unit = |v: f64| v.is_finite() && (0.0..1.0).contains(&v);
        if !unit(self.alpha) {
            return Err(Error::InvalidConfig("model.alpha must lie in [0, 1)".into()));
        }
        if !unit(self.beta) {
            return Err(Error::InvalidConfig("model.beta must lie in [0, 1)".into()));
        }
        if self.alpha == 0.0 && self.beta == 0.0 {
            return Err(Error::InvalidConfig(
                "model.alpha and model.beta cannot both vanish".into(),
            ));
        }
        if !(self.gamma.is_finite() && self.gamma > 0.0) {
            return Err(Error::InvalidConfig("model.gamma must be positive".into()));
        }
        if !(self.final_time.is_finite() && self.final_time >= 0.0) {
            return Err(Error::InvalidConfig("model.final_time must be nonnegative".into()));
        }
        self.potential.validate()?;
        self.proliferation.validate()
    }

    pub fn regime(&self) -> Regime {
        if self.beta == 0.0 {
            Regime::BetaLimit
        } else if self.alpha == 0.0 {
            Regime::AlphaLimit
        } else {
            Regime::Viscous
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct SolverConfig {
    pub dt: f64,
    /// Tolerance on `(r₁² + r₂² + r₃²)^{1/2}`, see [`Residuals`].
    pub newton_tol: f64,
    pub newton_max: usize,
    /// Backtracking factor applied to the Newton step.
    pub damping: f64,
    pub max_halvings: usize,
    pub lin_tol: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            dt: 1e-3,
            newton_tol: 1e-10,
            newton_max: 50,
            damping: 0.5,
            max_halvings: 20,
            lin_tol: 1e-12,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |v: f64| v.is_finite() && v > 0.0;
        if !positive(self.dt) {
            return Err(Error::InvalidConfig("solver.dt must be positive".into()));
        }
        if !positive(self.newton_tol) || !positive(self.lin_tol) {
            return Err(Error::InvalidConfig("solver tolerances must be positive".into()));
        }
        if self.newton_max == 0 {
            return Err(Error::InvalidConfig("solver.newton_max must be at least 1".into()));
        }
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::InvalidConfig("solver.damping must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

/// Discrete fields at one time level.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct State {
    pub mu: Field,
    pub phi: Field,
    pub sigma: Field,
    /// Selection `ξ ∈ B(φ)`; the regularized `B(φ)` for states produced by the solver.
    pub xi: Field,
    pub t: f64,
}

impl State {
    /// Builds a state with `ξ = B(φ)` cellwise.
    pub fn new(mu: Field, phi: Field, sigma: Field, t: f64, potential: &PotentialSpec) -> Result<Self> {
        let xi = phi.map(|r| potential.convex_derivative_clamped(r));
        Self::with_selection(mu, phi, sigma, xi, t)
    }

    /// Builds a state with an explicitly given selection `ξ`.
    pub fn with_selection(mu: Field, phi: Field, sigma: Field, xi: Field, t: f64) -> Result<Self> {
        let grid = *mu.grid();
        if *phi.grid() != grid || *sigma.grid() != grid || *xi.grid() != grid {
            return Err(Error::GridMismatch);
        }
        let state = State { mu, phi, sigma, xi, t };
        if !state.is_finite() {
            return Err(Error::NonFinite { what: "state" });
        }
        Ok(state)
    }

    pub fn grid(&self) -> &Grid {
        self.mu.grid()
    }

    pub fn is_finite(&self) -> bool {
        self.mu.is_finite() && self.phi.is_finite() && self.sigma.is_finite() && self.xi.is_finite() && self.t.is_finite()
    }
}

/// Accepted states `t_0 = 0, …, t_K = T` of one solve.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub states: Vec<State>,
    pub dt: f64,
    /// Newton statistics, one entry per step.
    pub stats: Vec<StepStats>,
}

impl Trajectory {
    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn last(&self) -> &State {
        self.states.last().expect("trajectory holds the initial state")
    }

    /// Collects one derived field per sample.
    pub fn samples(&self, f: impl Fn(&State) -> Field) -> Vec<Field> {
        self.states.iter().map(f).collect()
    }

    /// Conserved quantity at every sample.
    pub fn conserved_series(&self, params: &ModelParams) -> Vec<f64> {
        self.states.iter().map(|s| conserved_quantity(s, params)).collect()
    }

    /// `max_k |Q(t_k) − Q(0)|` and `Q(0)` for `Q = ∫(αμ + φ + σ)`.
    pub fn conservation_drift(&self, params: &ModelParams) -> (f64, f64) {
        let series = self.conserved_series(params);
        let q0 = series[0];
        let drift = series.iter().fold(0.0, |m: f64, q| m.max((q - q0).abs()));
        (drift, q0)
    }

    /// Largest observed `r_{k+1} / r_k²` over all steps, see [`StepStats::quadratic_constant`].
    pub fn newton_quadratic_constant(&self) -> Option<f64> {
        self.stats
            .iter()
            .filter_map(StepStats::quadratic_constant)
            .fold(None, |m: Option<f64>, c| Some(m.map_or(c, |m| m.max(c))))
    }
}
