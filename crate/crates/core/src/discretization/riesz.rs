use super::grid::{Field, Grid};
use super::operators::{inner_h, laplacian, norm_h};
use crate::error::{Error, Result};
use crate::linalg::{BandedLu, BandedMatrix};
use crate::math;

/// Default relative residual accepted from a Riesz solve.
pub const DEFAULT_LIN_TOL: f64 = 1e-12;

/// Factorized discrete Riesz map `A_h = −Δ_h + I` with Neumann conditions.
///
/// Build once per grid and share by reference; solving only reads the factors.
#[derive(Clone, Debug)]
pub struct RieszOperator {
    grid: Grid,
    lu: BandedLu,
    lin_tol: f64,
}

impl RieszOperator {
    pub fn new(grid: Grid) -> Result<Self> {
        Self::with_tolerance(grid, DEFAULT_LIN_TOL)
    }

    pub fn with_tolerance(grid: Grid, lin_tol: f64) -> Result<Self> {
        let n = grid.cells();
        let reach = grid.stencil_reach();
        let inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
        let mut a = BandedMatrix::zeros(n, reach, reach);
        for c in 0..n {
            a.add(c, c, 1.0);
            grid.for_each_neighbor(c, |nb| {
                a.add(c, c, inv_h2);
                a.add(c, nb, -inv_h2);
            });
        }
        Ok(RieszOperator {
            grid,
            lu: a.factorize()?,
            lin_tol,
        })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Solves `(−Δ_h + I) w = f`.
    pub fn solve(&self, f: &Field) -> Result<Field> {
        if *f.grid() != self.grid {
            return Err(Error::GridMismatch);
        }
        if !f.is_finite() {
            return Err(Error::NonFinite { what: "Riesz right-hand side" });
        }
        let w = Field::from_values(self.grid, self.lu.solve(f.values()))
            .map_err(|_| Error::LinearSolve { residual: f64::INFINITY })?;
        let lap = laplacian(&w);
        let r = w.zip_with(&lap, |a, b| a - b)?.zip_with(f, |a, b| a - b)?;
        let residual = norm_h(&r);
        // normwise backward error: rounding in A·w alone is of order eps·‖A‖·‖w‖
        let operator_norm = 1.0 + 4.0 * self.grid.dim() as f64 / (self.grid.spacing() * self.grid.spacing());
        let scale = operator_norm * norm_h(&w) + norm_h(f);
        if residual > self.lin_tol * scale.max(f64::MIN_POSITIVE) {
            return Err(Error::LinearSolve { residual });
        }
        Ok(w)
    }

    /// Dual inner product `(f, g)_* = ⟨f, A⁻¹ g⟩`.
    pub fn dual_inner(&self, f: &Field, g: &Field) -> Result<f64> {
        inner_h(f, &self.solve(g)?)
    }

    /// `‖f‖_* = ⟨f, A⁻¹ f⟩^{1/2}`.
    pub fn dual_norm(&self, f: &Field) -> Result<f64> {
        Ok(math::sqrt(self.dual_inner(f, f)?.max(0.0)))
    }
}

/// One-off `A⁻¹ f`; prefer a shared [`RieszOperator`] for repeated solves.
pub fn riesz_inverse(f: &Field) -> Result<Field> {
    RieszOperator::new(*f.grid())?.solve(f)
}

/// One-off `‖f‖_*`.
pub fn norm_vstar(f: &Field) -> Result<f64> {
    RieszOperator::new(*f.grid())?.dual_norm(f)
}
