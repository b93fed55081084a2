use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::discretization::{norm_h, Field, Grid};
use crate::error::{Error, Result};
use crate::math;
use crate::solver::{solve_forced, Forcing, ModelParams, SolverConfig, State};

/// Exact triple `u(x, t) = e^{−λt} (c₀ + c₁ Π_d cos(π x_d / ℓ))` for each of
/// `μ, φ, σ`, with `[c₀, c₁]` stored per field and `λ = decay`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct ManufacturedSolution {
    pub decay: f64,
    pub mu: [f64; 2],
    pub phi: [f64; 2],
    pub sigma: [f64; 2],
}

impl ManufacturedSolution {
    /// Time-independent constants.
    pub fn constants(mu: f64, phi: f64, sigma: f64) -> Self {
        ManufacturedSolution {
            decay: 0.0,
            mu: [mu, 0.0],
            phi: [phi, 0.0],
            sigma: [sigma, 0.0],
        }
    }

    /// `φ = e^{−t} cos(πx)` with `μ` and `σ` of the same shape.
    pub fn decaying_cosine() -> Self {
        ManufacturedSolution {
            decay: 1.0,
            mu: [0.2, 0.5],
            phi: [0.0, 1.0],
            sigma: [0.5, 0.3],
        }
    }

    fn shape(grid: &Grid, x: [f64; 2]) -> f64 {
        let k = PI / grid.extent();
        x[..grid.dim()].iter().map(|&xi| math::cos(k * xi)).product()
    }

    /// `(u, ∂t u, Δu)` for coefficients `c` at `(x, t)`.
    fn eval(&self, grid: &Grid, c: [f64; 2], t: f64, x: [f64; 2]) -> (f64, f64, f64) {
        let k = PI / grid.extent();
        let eigen = grid.dim() as f64 * k * k;
        let damp = math::exp(-self.decay * t);
        let s = Self::shape(grid, x);
        let u = damp * (c[0] + c[1] * s);
        (u, -self.decay * u, -eigen * damp * c[1] * s)
    }

    /// Exact state at time `t` with the solver's selection.
    pub fn state(&self, grid: Grid, t: f64, params: &ModelParams) -> Result<State> {
        let field = |c: [f64; 2]| Field::from_fn(grid, |x| self.eval(&grid, c, t, x).0);
        let mut state = State::new(field(self.mu), field(self.phi), field(self.sigma), t, &params.potential)?;
        state.t = t;
        Ok(state)
    }
}

struct ManufacturedForcing<'a> {
    sol: &'a ManufacturedSolution,
    params: &'a ModelParams,
    grid: Grid,
}

impl Forcing for ManufacturedForcing<'_> {
    fn at(&self, t: f64, x: [f64; 2]) -> [f64; 3] {
        let p = self.params;
        let (m, dm, lm) = self.sol.eval(&self.grid, self.sol.mu, t, x);
        let (f, df, lf) = self.sol.eval(&self.grid, self.sol.phi, t, x);
        let (s, ds, ls) = self.sol.eval(&self.grid, self.sol.sigma, t, x);
        let r = p.proliferation.rate(f) * (s - p.gamma * m);
        [
            p.alpha * dm + df - lm - r,
            m - p.beta * df + lf - p.potential.convex_derivative_clamped(f) - p.potential.smooth_force(f),
            ds - ls + r,
        ]
    }
}

/// Error at the final time for one `(grid, dt)` pair.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OrderLevel {
    pub n: usize,
    pub dt: f64,
    /// `(‖e_μ‖² + ‖e_φ‖² + ‖e_σ‖²)^{1/2}` at `T`.
    pub error: f64,
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct OrderReport {
    pub levels: Vec<OrderLevel>,
    /// `error[k] / error[k+1]`.
    pub ratios: Vec<f64>,
    /// `log₂` of each ratio; the observed order when the refinement factor is 2.
    pub orders: Vec<f64>,
}

/// Runs the forced problem on each `(grid, dt)` level and compares with the exact triple at `T`.
pub fn manufactured_run(
    sol: &ManufacturedSolution,
    params: &ModelParams,
    levels: &[(Grid, f64)],
    cfg: &SolverConfig,
) -> Result<OrderReport> {
    if levels.is_empty() {
        return Err(Error::InsufficientData { needed: 1, got: 0 });
    }
    let t_end = params.final_time;
    let mut out = Vec::with_capacity(levels.len());
    for &(grid, dt) in levels {
        let level_cfg = SolverConfig { dt, ..*cfg };
        let initial = sol.state(grid, 0.0, params)?;
        let forcing = ManufacturedForcing { sol, params, grid };
        let traj = solve_forced(&initial, params, &level_cfg, Some(&forcing))?;
        let exact = sol.state(grid, t_end, params)?;
        let last = traj.last();
        let e = |a: &Field, b: &Field| norm_h(&(a - b));
        let (em, ef, es) = (e(&last.mu, &exact.mu), e(&last.phi, &exact.phi), e(&last.sigma, &exact.sigma));
        out.push(OrderLevel {
            n: grid.n(),
            dt,
            error: math::sqrt(em * em + ef * ef + es * es),
        });
    }
    let ratios: Vec<f64> = out.windows(2).map(|w| w[0].error / w[1].error).collect();
    let orders = ratios.iter().map(|r| math::ln(*r) / core::f64::consts::LN_2).collect();
    Ok(OrderReport {
        levels: out,
        ratios,
        orders,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potentials::{PotentialSpec, Proliferation};

    fn params(t: f64) -> ModelParams {
        ModelParams {
            alpha: 0.5,
            beta: 0.5,
            gamma: 1.0,
            potential: PotentialSpec::double_well(),
            proliferation: Proliferation::Constant(1.0),
            final_time: t,
        }
    }

    #[test]
    fn constants_are_reproduced_to_solver_tolerance() {
        let sol = ManufacturedSolution::constants(0.3, -0.2, 0.7);
        let grid = Grid::line(16).unwrap();
        let rep = manufactured_run(&sol, &params(0.1), &[(grid, 0.02)], &SolverConfig::default()).unwrap();
        assert!(rep.levels[0].error <= 1e-10, "{}", rep.levels[0].error);
    }

    #[test]
    fn two_levels_give_one_ratio() {
        let sol = ManufacturedSolution::decaying_cosine();
        let p = params(0.1);
        let levels = [(Grid::line(32).unwrap(), 1e-3), (Grid::line(64).unwrap(), 1e-3)];
        let rep = manufactured_run(&sol, &p, &levels, &SolverConfig::default()).unwrap();
        assert_eq!(rep.ratios.len(), 1);
        assert!(rep.levels.iter().all(|l| l.error.is_finite() && l.error < 1e-2));
    }
}
