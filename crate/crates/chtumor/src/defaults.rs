//! Every default used by the front end, in one place. Each run echoes the
//! values it actually used into its summary, so this table is the only
//! source of implicit numbers.

use serde::Serialize;

pub const GAMMA: f64 = 1.0;
pub const EPSILON: f64 = chtumor_core::potentials::DEFAULT_EPSILON;
pub const KAPPA: f64 = chtumor_core::potentials::DEFAULT_KAPPA;
pub const PROLIFERATION: f64 = 1.0;

pub const GRID_DIM: usize = 1;
pub const GRID_N: usize = 128;
pub const GRID_EXTENT: f64 = 1.0;

pub const DT: f64 = 1e-3;
pub const NEWTON_TOL: f64 = 1e-10;
pub const NEWTON_MAX: usize = 50;
pub const DAMPING: f64 = 0.5;
pub const MAX_HALVINGS: usize = 20;
pub const LIN_TOL: f64 = 1e-12;

/// `(mean, amplitude, mode)`.
pub const INITIAL_MU: (f64, f64, u32) = (0.1, 0.1, 1);
pub const INITIAL_PHI: (f64, f64, u32) = (0.0, 0.2, 1);
pub const INITIAL_SIGMA: (f64, f64, u32) = (0.1, 0.1, 1);

pub const SWEEP_VALUES: [f64; 5] = chtumor_core::studies::DEFAULT_SWEEP_VALUES;
pub const SWEEP_REFERENCE: f64 = 0.0;

pub const NONUNIQ_FINAL_TIME: f64 = 1.0;
pub const NONUNIQ_PSI_A: f64 = 0.0;
pub const NONUNIQ_PSI_B: f64 = 0.5;

pub const MANUFACTURED_SPATIAL_N: [usize; 3] = [16, 32, 64];
pub const MANUFACTURED_SPATIAL_DT: f64 = 1e-5;
pub const MANUFACTURED_SPATIAL_FINAL_TIME: f64 = 0.1;
pub const MANUFACTURED_TEMPORAL_N: usize = 256;
pub const MANUFACTURED_TEMPORAL_DT: [f64; 3] = [0.02, 0.01, 0.005];
pub const MANUFACTURED_TEMPORAL_FINAL_TIME: f64 = 0.5;

pub const OUTPUT_DIR: &str = "chtumor-out";
pub const CHECKPOINT_EVERY: usize = 0;

/// The table above as a serializable record, written into every summary.
#[derive(Debug, Serialize)]
pub struct DefaultsTable {
    pub gamma: f64,
    pub epsilon: f64,
    pub kappa: f64,
    pub proliferation: f64,
    pub grid_dim: usize,
    pub grid_n: usize,
    pub grid_extent: f64,
    pub dt: f64,
    pub newton_tol: f64,
    pub newton_max: usize,
    pub damping: f64,
    pub max_halvings: usize,
    pub lin_tol: f64,
    pub initial_mu: (f64, f64, u32),
    pub initial_phi: (f64, f64, u32),
    pub initial_sigma: (f64, f64, u32),
    pub sweep_values: [f64; 5],
    pub sweep_reference: f64,
    pub nonuniq_final_time: f64,
    pub nonuniq_psi_a: f64,
    pub nonuniq_psi_b: f64,
    pub manufactured_spatial_n: [usize; 3],
    pub manufactured_spatial_dt: f64,
    pub manufactured_spatial_final_time: f64,
    pub manufactured_temporal_n: usize,
    pub manufactured_temporal_dt: [f64; 3],
    pub manufactured_temporal_final_time: f64,
    pub output_dir: &'static str,
    pub checkpoint_every: usize,
}

pub fn table() -> DefaultsTable {
    DefaultsTable {
        gamma: GAMMA,
        epsilon: EPSILON,
        kappa: KAPPA,
        proliferation: PROLIFERATION,
        grid_dim: GRID_DIM,
        grid_n: GRID_N,
        grid_extent: GRID_EXTENT,
        dt: DT,
        newton_tol: NEWTON_TOL,
        newton_max: NEWTON_MAX,
        damping: DAMPING,
        max_halvings: MAX_HALVINGS,
        lin_tol: LIN_TOL,
        initial_mu: INITIAL_MU,
        initial_phi: INITIAL_PHI,
        initial_sigma: INITIAL_SIGMA,
        sweep_values: SWEEP_VALUES,
        sweep_reference: SWEEP_REFERENCE,
        nonuniq_final_time: NONUNIQ_FINAL_TIME,
        nonuniq_psi_a: NONUNIQ_PSI_A,
        nonuniq_psi_b: NONUNIQ_PSI_B,
        manufactured_spatial_n: MANUFACTURED_SPATIAL_N,
        manufactured_spatial_dt: MANUFACTURED_SPATIAL_DT,
        manufactured_spatial_final_time: MANUFACTURED_SPATIAL_FINAL_TIME,
        manufactured_temporal_n: MANUFACTURED_TEMPORAL_N,
        manufactured_temporal_dt: MANUFACTURED_TEMPORAL_DT,
        manufactured_temporal_final_time: MANUFACTURED_TEMPORAL_FINAL_TIME,
        output_dir: OUTPUT_DIR,
        checkpoint_every: CHECKPOINT_EVERY,
    }
}
