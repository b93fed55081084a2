use alloc::vec;
use alloc::vec::Vec;

use super::{ModelParams, SolverConfig, State, Trajectory, MAX_STEPS};
use crate::discretization::{laplacian, Field, Grid};
use crate::error::{Error, Result};
use crate::linalg::BandedMatrix;
use crate::math;

/// Source terms added to the three equations, evaluated at the new time level.
///
/// Only used to manufacture exact solutions; physical runs pass no forcing.
pub trait Forcing {
    /// `[g₁, g₂, g₃]` at time `t` and point `x`.
    fn at(&self, t: f64, x: [f64; 2]) -> [f64; 3];
}

/// `H`-norms of the three discrete equation residuals of one transition.
///
/// ```text
/// r₁ = ‖α(μ−μ⁰)/τ + (φ−φ⁰)/τ − Δμ − R‖
/// r₂ = ‖μ − β(φ−φ⁰)/τ + Δφ − ξ − π(φ)‖
/// r₃ = ‖(σ−σ⁰)/τ − Δσ + R‖,      R = p(φ)(σ − γμ)
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Residuals {
    pub balance: f64,
    pub potential: f64,
    pub nutrient: f64,
}

impl Residuals {
    pub fn combined(&self) -> f64 {
        math::sqrt(self.balance * self.balance + self.potential * self.potential + self.nutrient * self.nutrient)
    }

    pub fn max(&self) -> f64 {
        self.balance.max(self.potential).max(self.nutrient)
    }

    pub fn is_finite(&self) -> bool {
        self.balance.is_finite() && self.potential.is_finite() && self.nutrient.is_finite()
    }
}

/// Newton bookkeeping for one accepted step.
#[derive(Clone, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct StepStats {
    pub iterations: usize,
    /// Combined residual before each iteration and after the last one.
    pub residual_history: Vec<f64>,
    pub backtracks: usize,
    /// Set when the step had to be redone as two half steps.
    pub retried: bool,
}

impl StepStats {
    /// `max r_{k+1} / r_k²` over consecutive residuals whose successor is still
    /// above `1e-10`; below that the residual sits on its round-off floor on
    /// fine grids and the quotient says nothing about convergence. `None` when
    /// no such pair exists.
    pub fn quadratic_constant(&self) -> Option<f64> {
        self.residual_history
            .windows(2)
            .filter(|w| w[1] > 1e-10 && w[0] > 0.0)
            .map(|w| w[1] / (w[0] * w[0]))
            .fold(None, |m: Option<f64>, c| Some(m.map_or(c, |m| m.max(c))))
    }
}

struct Transition<'a> {
    prev: &'a State,
    params: &'a ModelParams,
    dt: f64,
    forcing: Option<Vec<[f64; 3]>>,
}

impl<'a> Transition<'a> {
    fn new(prev: &'a State, params: &'a ModelParams, dt: f64, forcing: Option<&dyn Forcing>) -> Self {
        let grid = *prev.grid();
        let t = prev.t + dt;
        let forcing = forcing.map(|g| (0..grid.cells()).map(|c| g.at(t, grid.center(c))).collect());
        Transition {
            prev,
            params,
            dt,
            forcing,
        }
    }

    fn grid(&self) -> Grid {
        *self.prev.grid()
    }

    /// Cellwise residuals of the three equations.
    fn residual_fields(&self, mu: &Field, phi: &Field, sigma: &Field, xi: &Field) -> [Vec<f64>; 3] {
        let p = self.params;
        let inv_dt = 1.0 / self.dt;
        let (lap_mu, lap_phi, lap_sigma) = (laplacian(mu), laplacian(phi), laplacian(sigma));
        let cells = self.grid().cells();
        let mut out = [vec![0.0; cells], vec![0.0; cells], vec![0.0; cells]];
        let prev = self.prev;
        for c in 0..cells {
            let (m, f, s) = (mu.values()[c], phi.values()[c], sigma.values()[c]);
            let dmu = (m - prev.mu.values()[c]) * inv_dt;
            let dphi = (f - prev.phi.values()[c]) * inv_dt;
            let dsigma = (s - prev.sigma.values()[c]) * inv_dt;
            let r = p.proliferation.rate(f) * (s - p.gamma * m);
            let g = self.forcing.as_ref().map_or([0.0; 3], |g| g[c]);
            out[0][c] = p.alpha * dmu + dphi - lap_mu.values()[c] - r - g[0];
            out[1][c] = m - p.beta * dphi + lap_phi.values()[c]
                - xi.values()[c]
                - p.potential.smooth_force(f)
                - g[1];
            out[2][c] = dsigma - lap_sigma.values()[c] + r - g[2];
        }
        out
    }

    fn norms(&self, fields: &[Vec<f64>; 3]) -> Residuals {
        let w = self.grid().cell_measure();
        let norm = |v: &Vec<f64>| math::sqrt(v.iter().map(|x| x * x).sum::<f64>() * w);
        Residuals {
            balance: norm(&fields[0]),
            potential: norm(&fields[1]),
            nutrient: norm(&fields[2]),
        }
    }

    fn selection(&self, phi: &Field) -> Field {
        phi.map(|r| self.params.potential.convex_derivative_clamped(r))
    }

    /// Jacobian of the residual in the interleaved ordering `(μ_c, φ_c, σ_c)`.
    fn jacobian(&self, mu: &Field, phi: &Field, sigma: &Field) -> BandedMatrix {
        let grid = self.grid();
        let p = self.params;
        let cells = grid.cells();
        let band = 3 * grid.stencil_reach();
        let mut jac = BandedMatrix::zeros(3 * cells, band, band);
        let inv_dt = 1.0 / self.dt;
        let inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
        for c in 0..cells {
            let (m, f, s) = (mu.values()[c], phi.values()[c], sigma.values()[c]);
            let rate = p.proliferation.rate(f);
            // ∂R/∂φ
            let dr_dphi = p.proliferation.rate_slope(f) * (s - p.gamma * m);
            let (im, iphi, isig) = (3 * c, 3 * c + 1, 3 * c + 2);

            jac.add(im, im, p.alpha * inv_dt + p.gamma * rate);
            jac.add(im, iphi, inv_dt - dr_dphi);
            jac.add(im, isig, -rate);

            jac.add(iphi, im, 1.0);
            jac.add(
                iphi,
                iphi,
                -p.beta * inv_dt - p.potential.convex_slope(f) - p.potential.smooth_force_slope(f),
            );

            jac.add(isig, im, -p.gamma * rate);
            jac.add(isig, iphi, dr_dphi);
            jac.add(isig, isig, inv_dt + rate);

            grid.for_each_neighbor(c, |nb| {
                jac.add(im, im, inv_h2);
                jac.add(im, 3 * nb, -inv_h2);
                jac.add(iphi, iphi, -inv_h2);
                jac.add(iphi, 3 * nb + 1, inv_h2);
                jac.add(isig, isig, inv_h2);
                jac.add(isig, 3 * nb + 2, -inv_h2);
            });
        }
        jac
    }

    fn run(&self, cfg: &SolverConfig) -> Result<(State, StepStats)> {
        let grid = self.grid();
        let cells = grid.cells();
        let mut mu = self.prev.mu.clone();
        let mut phi = self.prev.phi.clone();
        let mut sigma = self.prev.sigma.clone();
        let mut xi = self.selection(&phi);
        let mut fields = self.residual_fields(&mu, &phi, &sigma, &xi);
        let mut res = self.norms(&fields).combined();
        let mut stats = StepStats {
            residual_history: vec![res],
            ..StepStats::default()
        };
        let t_new = self.prev.t + self.dt;
        let failure = |residual: f64, iterations: usize| Error::StepFailure {
            t: t_new,
            residual,
            iterations,
        };

        while !(res <= cfg.newton_tol) {
            if stats.iterations >= cfg.newton_max || !res.is_finite() {
                return Err(failure(res, stats.iterations));
            }
            let mut rhs = vec![0.0; 3 * cells];
            for c in 0..cells {
                for k in 0..3 {
                    rhs[3 * c + k] = -fields[k][c];
                }
            }
            let lu = self
                .jacobian(&mu, &phi, &sigma)
                .factorize()
                .map_err(|_| failure(res, stats.iterations))?;
            lu.solve_in_place(&mut rhs);
            let delta = rhs;

            let mut lambda = 1.0;
            let mut accepted = false;
            for _ in 0..=cfg.max_halvings {
                let shifted = |base: &Field, k: usize| {
                    let mut out = base.clone();
                    for (c, v) in out.values_mut().iter_mut().enumerate() {
                        *v += lambda * delta[3 * c + k];
                    }
                    out
                };
                let (mu_try, phi_try, sigma_try) = (shifted(&mu, 0), shifted(&phi, 1), shifted(&sigma, 2));
                let xi_try = self.selection(&phi_try);
                let fields_try = self.residual_fields(&mu_try, &phi_try, &sigma_try, &xi_try);
                let res_try = self.norms(&fields_try).combined();
                if res_try.is_finite() && res_try < res {
                    mu = mu_try;
                    phi = phi_try;
                    sigma = sigma_try;
                    xi = xi_try;
                    fields = fields_try;
                    res = res_try;
                    accepted = true;
                    break;
                }
                lambda *= cfg.damping;
                stats.backtracks += 1;
            }
            stats.iterations += 1;
            if !accepted {
                return Err(failure(res, stats.iterations));
            }
            stats.residual_history.push(res);
        }

        let state = State::with_selection(mu, phi, sigma, xi, t_new)?;
        Ok((state, stats))
    }
}

/// Residual norms of the transition `prev → next` using `next.xi` as the selection.
///
/// `next.t − prev.t` is not consulted; the step length is `dt`.
pub fn residual(prev: &State, next: &State, params: &ModelParams, dt: f64) -> Result<Residuals> {
    if prev.grid() != next.grid() {
        return Err(Error::GridMismatch);
    }
    let tr = Transition::new(prev, params, dt, None);
    let fields = tr.residual_fields(&next.mu, &next.phi, &next.sigma, &next.xi);
    Ok(tr.norms(&fields))
}

/// One backward-Euler step of length `cfg.dt`.
pub fn step(prev: &State, params: &ModelParams, cfg: &SolverConfig) -> Result<(State, StepStats)> {
    step_forced(prev, params, cfg, cfg.dt, None)
}

/// One backward-Euler step of length `dt` with optional forcing.
pub fn step_forced(
    prev: &State,
    params: &ModelParams,
    cfg: &SolverConfig,
    dt: f64,
    forcing: Option<&dyn Forcing>,
) -> Result<(State, StepStats)> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidConfig("time step must be positive".into()));
    }
    Transition::new(prev, params, dt, forcing).run(cfg)
}

/// Integrates from `initial` up to `params.final_time`.
pub fn solve(initial: &State, params: &ModelParams, cfg: &SolverConfig) -> Result<Trajectory> {
    solve_forced(initial, params, cfg, None)
}

pub fn solve_forced(
    initial: &State,
    params: &ModelParams,
    cfg: &SolverConfig,
    forcing: Option<&dyn Forcing>,
) -> Result<Trajectory> {
    params.validate()?;
    cfg.validate()?;
    if !initial.is_finite() {
        return Err(Error::NonFinite { what: "initial state" });
    }
    let total = params.final_time;
    let ratio = total / cfg.dt;
    if ratio > MAX_STEPS as f64 {
        return Err(Error::InvalidConfig("final_time / dt exceeds the step limit".into()));
    }
    let steps = math::ceil(ratio - 1e-9).max(0.0) as usize;

    let mut states = Vec::with_capacity(steps + 1);
    let mut stats = Vec::with_capacity(steps);
    states.push(initial.clone());
    for k in 0..steps {
        let prev = states.last().expect("nonempty");
        let t_next = if k + 1 == steps { total } else { (k + 1) as f64 * cfg.dt };
        let dt = t_next - prev.t;
        let (mut next, st) = match step_forced(prev, params, cfg, dt, forcing) {
            Ok(ok) => ok,
            Err(Error::StepFailure { .. }) => retry_halved(prev, params, cfg, dt, forcing)?,
            Err(e) => return Err(e),
        };
        next.t = t_next;
        states.push(next);
        stats.push(st);
    }
    Ok(Trajectory {
        states,
        dt: cfg.dt,
        stats,
    })
}

fn retry_halved(
    prev: &State,
    params: &ModelParams,
    cfg: &SolverConfig,
    dt: f64,
    forcing: Option<&dyn Forcing>,
) -> Result<(State, StepStats)> {
    let half = 0.5 * dt;
    let (mid, first) = step_forced(prev, params, cfg, half, forcing)?;
    let (end, second) = step_forced(&mid, params, cfg, half, forcing)?;
    let mut residual_history = first.residual_history;
    residual_history.extend(second.residual_history);
    Ok((
        end,
        StepStats {
            iterations: first.iterations + second.iterations,
            residual_history,
            backtracks: first.backtracks + second.backtracks,
            retried: true,
        },
    ))
}
