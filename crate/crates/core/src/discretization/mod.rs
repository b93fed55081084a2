//! Uniform-grid Neumann operators and the discrete `H`, `V` and `V*` norms.
//!
//! `H = L²(Ω)`, `V = H¹(Ω)` and `V*` is the dual of `V`, normed through the
//! Riesz map `A = −Δ + I`: `‖f‖_*² = ⟨f, A⁻¹ f⟩`.

mod grid;
mod operators;
mod riesz;

use alloc::vec::Vec;

pub use grid::{Field, Grid};
pub use operators::{dirichlet_form, gradient_norm_sq, inner_h, integral, laplacian, norm_h, norm_v};
pub use riesz::{norm_vstar, riesz_inverse, RieszOperator, DEFAULT_LIN_TOL};

use crate::error::{Error, Result};
use crate::math;

/// Space-time norm selector for [`bochner_norm`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BochnerKind {
    L2H,
    L2V,
    LinfH,
    LinfVstar,
    L2Vstar,
}

/// Space-time norm of a uniformly sampled trajectory `f(t_0), …, f(t_K)`.
///
/// Time integrals use the left-endpoint rectangle rule over `t_0 … t_{K−1}`
/// and the `L∞` norms take the maximum over the same samples. A single sample
/// (zero-length interval) has zero `L²` norm and its own value as `L∞` norm.
pub fn bochner_norm(samples: &[Field], dt: f64, kind: BochnerKind) -> Result<f64> {
    let first = samples.first().ok_or(Error::EmptyTrajectory)?;
    let riesz = match kind {
        BochnerKind::LinfVstar | BochnerKind::L2Vstar => Some(RieszOperator::new(*first.grid())?),
        _ => None,
    };
    let spatial = |f: &Field| -> Result<f64> {
        match kind {
            BochnerKind::L2H | BochnerKind::LinfH => Ok(norm_h(f)),
            BochnerKind::L2V => Ok(norm_v(f)),
            BochnerKind::LinfVstar | BochnerKind::L2Vstar => {
                riesz.as_ref().expect("built above").dual_norm(f)
            }
        }
    };
    let norms = samples.iter().map(spatial).collect::<Result<Vec<_>>>()?;
    Ok(match kind {
        BochnerKind::L2H | BochnerKind::L2V | BochnerKind::L2Vstar => time_l2(&norms, dt),
        BochnerKind::LinfH | BochnerKind::LinfVstar => time_linf(&norms),
    })
}

/// Left-endpoint `L²(0, T)` norm of per-sample spatial norms `n_0 … n_K`.
pub fn time_l2(norms: &[f64], dt: f64) -> f64 {
    let left = left_endpoints(norms);
    if norms.len() < 2 {
        return 0.0;
    }
    math::sqrt(left.iter().map(|v| v * v).sum::<f64>() * dt)
}

/// Maximum over the left endpoints `n_0 … n_{K−1}`.
pub fn time_linf(norms: &[f64]) -> f64 {
    left_endpoints(norms).iter().fold(0.0, |m: f64, v| m.max(*v))
}

/// `L²(0, T)` norm of per-interval values (e.g. difference quotients), one per step.
pub fn interval_l2(values: &[f64], dt: f64) -> f64 {
    math::sqrt(values.iter().map(|v| v * v).sum::<f64>() * dt)
}

fn left_endpoints(norms: &[f64]) -> &[f64] {
    match norms.len() {
        0 | 1 => norms,
        k => &norms[..k - 1],
    }
}
