use alloc::string::String;
use alloc::vec::Vec;

use super::{ModelParams, State, Trajectory};
use crate::discretization::{
    dirichlet_form, integral, interval_l2, norm_h, norm_v, time_l2, time_linf, Field, RieszOperator,
};
use crate::error::{Error, Result};
use crate::math;

/// `∫_Ω (αμ + φ + σ)`.
pub fn conserved_quantity(state: &State, params: &ModelParams) -> f64 {
    let a = params.alpha;
    let (m, f, s) = (state.mu.values(), state.phi.values(), state.sigma.values());
    let sum: f64 = (0..m.len()).map(|c| a * m[c] + f[c] + s[c]).sum();
    sum * state.grid().cell_measure()
}

fn potential_integral(phi: &Field, params: &ModelParams) -> f64 {
    integral(&phi.map(|r| params.potential.energy_clamped(r)))
}

/// `E = ∫(½|∇φ|² + F(φ)) + (α/2)∫μ²`, with the discrete Dirichlet form for the gradient.
pub fn energy(state: &State, params: &ModelParams) -> f64 {
    let grad = dirichlet_form(&state.phi, &state.phi).expect("fields of one state share a grid");
    let mu = norm_h(&state.mu);
    0.5 * grad + potential_integral(&state.phi, params) + 0.5 * params.alpha * mu * mu
}

/// Left- and right-hand sides of the a-priori bound
///
/// ```text
/// α^{1/2}‖μ‖_{L∞(H)} + ‖∇μ‖_{L²(H)} + β^{1/2}‖∂tφ‖_{L²(H)} + ‖φ‖_{L∞(V)}
///   + ‖F(φ)‖^{1/2}_{L∞(L¹)} + ‖∂t(αμ+φ)‖_{L²(V*)} + ‖σ‖_{H¹(V*) ∩ L∞(H) ∩ L²(V)}
///   ≤ Ĉ (α^{1/2}‖μ₀‖ + ‖φ₀‖_V + ‖F(φ₀)‖^{1/2}_{L¹} + ‖σ₀‖)
/// ```
///
/// The constant `Ĉ` is not known; `ratio` reports the observed quotient.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct GenEstReport {
    pub aggregate: f64,
    pub data_term: f64,
    pub ratio: Option<f64>,
    pub components: Vec<(String, f64)>,
}

/// Evaluates [`GenEstReport`] on a trajectory.
pub fn genest(traj: &Trajectory, params: &ModelParams, riesz: &RieszOperator) -> Result<GenEstReport> {
    let states = &traj.states;
    let first = states.first().ok_or(Error::EmptyTrajectory)?;
    let dt = traj.dt;
    let (a, b) = (params.alpha, params.beta);

    let series = |f: &dyn Fn(&State) -> Result<f64>| states.iter().map(f).collect::<Result<Vec<f64>>>();
    let diffs = |f: &dyn Fn(&State, &State) -> Result<f64>| {
        states.windows(2).map(|w| f(&w[0], &w[1])).collect::<Result<Vec<f64>>>()
    };

    let mu_linf = time_linf(&series(&|s| Ok(norm_h(&s.mu)))?);
    let grad_mu = time_l2(&series(&|s| Ok(math::sqrt(dirichlet_form(&s.mu, &s.mu)?.max(0.0))))?, dt);
    let dphi = interval_l2(&diffs(&|p, n| Ok(norm_h(&(&n.phi - &p.phi)) / dt))?, dt);
    let phi_linf_v = time_linf(&series(&|s| Ok(norm_v(&s.phi)))?);
    let f_linf = time_linf(&series(&|s| Ok(potential_integral(&s.phi, params)))?);
    let combo = |s: &State| Field::lincomb(a, &s.mu, 1.0, &s.phi);
    let dcombo = interval_l2(
        &diffs(&|p, n| Ok(riesz.dual_norm(&(&combo(n)? - &combo(p)?))? / dt))?,
        dt,
    );
    let sigma_l2_dual = time_l2(&series(&|s| riesz.dual_norm(&s.sigma))?, dt);
    let dsigma_l2_dual = interval_l2(&diffs(&|p, n| Ok(riesz.dual_norm(&(&n.sigma - &p.sigma))? / dt))?, dt);
    let sigma_h1_dual = math::sqrt(sigma_l2_dual * sigma_l2_dual + dsigma_l2_dual * dsigma_l2_dual);
    let sigma_linf_h = time_linf(&series(&|s| Ok(norm_h(&s.sigma)))?);
    let sigma_l2_v = time_l2(&series(&|s| Ok(norm_v(&s.sigma)))?, dt);

    let components: Vec<(String, f64)> = [
        ("sqrt_alpha_mu_linf_h", math::sqrt(a) * mu_linf),
        ("grad_mu_l2_h", grad_mu),
        ("sqrt_beta_dt_phi_l2_h", math::sqrt(b) * dphi),
        ("phi_linf_v", phi_linf_v),
        ("sqrt_potential_linf_l1", math::sqrt(f_linf.max(0.0))),
        ("dt_alpha_mu_plus_phi_l2_vstar", dcombo),
        ("sigma_h1_vstar", sigma_h1_dual),
        ("sigma_linf_h", sigma_linf_h),
        ("sigma_l2_v", sigma_l2_v),
    ]
    .into_iter()
    .map(|(k, v)| (String::from(k), v))
    .collect();
    let aggregate = components.iter().map(|(_, v)| v).sum();

    let data_term = math::sqrt(a) * norm_h(&first.mu)
        + norm_v(&first.phi)
        + math::sqrt(potential_integral(&first.phi, params).max(0.0))
        + norm_h(&first.sigma);
    let ratio = if data_term > 0.0 {
        Some(aggregate / data_term)
    } else if aggregate == 0.0 {
        Some(0.0)
    } else {
        None
    };
    Ok(GenEstReport {
        aggregate,
        data_term,
        ratio,
        components,
    })
}

/// Energy history of a trajectory together with the a-priori bound report.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct EnergyReport {
    pub energies: Vec<f64>,
    /// `max_k (E(t_{k+1}) − E(t_k))`; nonpositive for a dissipative run.
    pub max_increase: f64,
    pub genest: GenEstReport,
}

/// `E(t_k)` along a trajectory. The sequence is a Lyapunov functional when `p ≡ 0`.
pub fn energy_check(traj: &Trajectory, params: &ModelParams) -> Result<EnergyReport> {
    let first = traj.states.first().ok_or(Error::EmptyTrajectory)?;
    let energies: Vec<f64> = traj.states.iter().map(|s| energy(s, params)).collect();
    let max_increase = energies
        .windows(2)
        .map(|w| w[1] - w[0])
        .fold(f64::NEG_INFINITY, f64::max);
    let riesz = RieszOperator::new(*first.grid())?;
    Ok(EnergyReport {
        max_increase: if energies.len() < 2 { 0.0 } else { max_increase },
        energies,
        genest: genest(traj, params, &riesz)?,
    })
}
