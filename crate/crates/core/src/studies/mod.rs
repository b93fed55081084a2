//! Parameter sweeps toward the singular limits, the explicit non-uniqueness
//! construction for `αL = 1`, and manufactured-solution order checks.

mod fit;
mod manufactured;
mod nonuniq;
mod sweep;

pub use fit::{fit_rate, RateFit};
pub use manufactured::{manufactured_run, ManufacturedSolution, OrderLevel, OrderReport};
pub use nonuniq::{candidate_trajectory, nonuniqueness_demo, CandidateReport, NonUniquenessConfig, NonUniquenessReport};
pub use sweep::{
    run_sweep, run_sweep_with, sweep_alpha, sweep_beta, ReferenceInfo, Runner, Sequential, StudyResult, StudyRow,
    SweepConfig, SweepKind, DEFAULT_SWEEP_VALUES,
};

use core::f64::consts::PI;

use crate::discretization::{Field, Grid};
use crate::error::Result;
use crate::math;
use crate::potentials::PotentialSpec;
use crate::solver::State;

/// `mean + amplitude · Π_d cos(mode · π · x_d / extent)`, Neumann-compatible.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Profile {
    pub mean: f64,
    pub amplitude: f64,
    pub mode: u32,
}

impl Profile {
    pub fn new(mean: f64, amplitude: f64, mode: u32) -> Self {
        Profile { mean, amplitude, mode }
    }

    pub fn field(&self, grid: Grid) -> Field {
        let k = self.mode as f64 * PI / grid.extent();
        let dim = grid.dim();
        Field::from_fn(grid, |x| {
            let shape: f64 = x[..dim].iter().map(|&xi| math::cos(k * xi)).product();
            self.mean + self.amplitude * shape
        })
    }

    pub fn scaled(&self, s: f64) -> Self {
        Profile {
            mean: s * self.mean,
            amplitude: s * self.amplitude,
            mode: self.mode,
        }
    }
}

/// Initial data `(μ₀, φ₀, σ₀)`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct InitialData {
    pub mu: Profile,
    pub phi: Profile,
    pub sigma: Profile,
}

impl Default for InitialData {
    /// `φ₀ = 0.2 cos(πx)`, `μ₀ = σ₀ = 0.1 + 0.1 cos(πx)`.
    fn default() -> Self {
        InitialData {
            mu: Profile::new(0.1, 0.1, 1),
            phi: Profile::new(0.0, 0.2, 1),
            sigma: Profile::new(0.1, 0.1, 1),
        }
    }
}

impl InitialData {
    pub fn state(&self, grid: Grid, potential: &PotentialSpec) -> Result<State> {
        State::new(
            self.mu.field(grid),
            self.phi.field(grid),
            self.sigma.field(grid),
            0.0,
            potential,
        )
    }

    /// Every profile multiplied by `s`.
    pub fn scaled(&self, s: f64) -> Self {
        InitialData {
            mu: self.mu.scaled(s),
            phi: self.phi.scaled(s),
            sigma: self.sigma.scaled(s),
        }
    }
}
