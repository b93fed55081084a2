//! Numerical core for the Cahn–Hilliard tumor-growth system
//!
//! ```text
//! α ∂tμ + ∂tφ − Δμ = p(φ)(σ − γμ)
//! μ = β ∂tφ − Δφ + ξ + π(φ),   ξ ∈ B(φ)
//! ∂tσ − Δσ = −p(φ)(σ − γμ)
//! ```
//!
//! with homogeneous Neumann conditions on a uniform cell-centered grid in one or
//! two dimensions. The crate covers the viscous problem (α, β > 0) and both
//! singular limits (β = 0 or α = 0), the space-time norms used to measure the
//! gap between them, and the parameter sweeps that estimate convergence rates.
//!
//! The crate is `no_std` and only needs an allocator. File formats, the command
//! line front end and threaded sweeps live in the `chtumor` crate.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod discretization;
mod error;
pub mod linalg;
pub(crate) mod math;
pub mod potentials;
pub mod solver;
pub mod studies;

pub use error::{Error, Result};
