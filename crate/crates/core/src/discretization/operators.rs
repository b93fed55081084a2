use super::grid::Field;
use crate::error::{Error, Result};
use crate::math;

/// Five-point (three-point in 1D) Neumann Laplacian with mirror ghost cells.
pub fn laplacian(f: &Field) -> Field {
    let grid = *f.grid();
    let inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    let v = f.values();
    let mut out = Field::zeros(grid);
    for (c, o) in out.values_mut().iter_mut().enumerate() {
        let mut acc = 0.0;
        grid.for_each_neighbor(c, |nb| acc += v[nb] - v[c]);
        *o = acc * inv_h2;
    }
    out
}

/// Discrete `L²(Ω)` inner product.
pub fn inner_h(f: &Field, g: &Field) -> Result<f64> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let s: f64 = f.values().iter().zip(g.values()).map(|(a, b)| a * b).sum();
    Ok(s * f.grid().cell_measure())
}

pub fn norm_h(f: &Field) -> f64 {
    let s: f64 = f.values().iter().map(|a| a * a).sum();
    math::sqrt(s * f.grid().cell_measure())
}

/// `∫ f` over the domain.
pub fn integral(f: &Field) -> f64 {
    f.values().iter().sum::<f64>() * f.grid().cell_measure()
}

/// Discrete Dirichlet form `⟨−Δ_h f, g⟩`: face differences over interior faces only.
pub fn dirichlet_form(f: &Field, g: &Field) -> Result<f64> {
    if f.grid() != g.grid() {
        return Err(Error::GridMismatch);
    }
    let grid = f.grid();
    let h = grid.spacing();
    let (fv, gv) = (f.values(), g.values());
    let mut s = 0.0;
    for c in 0..grid.cells() {
        grid.for_each_neighbor(c, |nb| {
            if nb > c {
                s += (fv[nb] - fv[c]) * (gv[nb] - gv[c]);
            }
        });
    }
    Ok(s / (h * h) * grid.cell_measure())
}

/// `‖∇f‖²` from forward face differences.
///
/// Each face difference is taken as the gradient on the dual cell around that
/// face; along each axis the half cells next to the boundary reuse the
/// adjacent face value, so the quadrature covers the whole domain.
pub fn gradient_norm_sq(f: &Field) -> f64 {
    let grid = f.grid();
    let n = grid.n();
    let h = grid.spacing();
    let v = f.values();
    let lines = if grid.dim() == 1 { 1 } else { n };
    let transverse = if grid.dim() == 1 { 1.0 } else { h };
    let mut total = 0.0;
    for axis in 0..grid.dim() {
        for line in 0..lines {
            let at = |k: usize| {
                if axis == 0 {
                    v[k + n * line]
                } else {
                    v[line + n * k]
                }
            };
            for k in 0..n - 1 {
                let d = (at(k + 1) - at(k)) / h;
                let weight = if k == 0 || k == n - 2 { 1.5 * h } else { h };
                total += d * d * weight * transverse;
            }
        }
    }
    total
}

/// `‖f‖_V = (‖∇f‖² + ‖f‖²)^{1/2}`.
pub fn norm_v(f: &Field) -> f64 {
    let h = norm_h(f);
    math::sqrt(gradient_norm_sq(f) + h * h)
}
