use alloc::vec::Vec;
use core::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// Uniform cell-centered mesh of `(0, extent)^dim`.
///
/// Cells are numbered with the x index running fastest: `c = ix + n * iy`.
#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Grid {
    dim: usize,
    n: usize,
    extent: f64,
}

impl Grid {
    pub fn new(dim: usize, n: usize, extent: f64) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::InvalidConfig("grid.dim must be 1 or 2".into()));
        }
        if n < 4 {
            return Err(Error::InvalidConfig("grid.n must be at least 4".into()));
        }
        if !(extent.is_finite() && extent > 0.0) {
            return Err(Error::InvalidConfig("grid.extent must be positive".into()));
        }
        Ok(Grid { dim, n, extent })
    }

    /// Unit interval with `n` cells.
    pub fn line(n: usize) -> Result<Self> {
        Self::new(1, n, 1.0)
    }

    /// Unit square with `n × n` cells.
    pub fn square(n: usize) -> Result<Self> {
        Self::new(2, n, 1.0)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Cells per axis.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn extent(&self) -> f64 {
        self.extent
    }

    pub fn spacing(&self) -> f64 {
        self.extent / self.n as f64
    }

    /// Total number of cells, `n^dim`.
    pub fn cells(&self) -> usize {
        if self.dim == 1 {
            self.n
        } else {
            self.n * self.n
        }
    }

    /// Measure of one cell, `h^dim`.
    pub fn cell_measure(&self) -> f64 {
        let h = self.spacing();
        if self.dim == 1 {
            h
        } else {
            h * h
        }
    }

    /// Cell center; the second coordinate is zero in 1D.
    pub fn center(&self, cell: usize) -> [f64; 2] {
        let h = self.spacing();
        let ix = cell % self.n;
        let iy = cell / self.n;
        let x = (ix as f64 + 0.5) * h;
        let y = if self.dim == 1 {
            0.0
        } else {
            (iy as f64 + 0.5) * h
        };
        [x, y]
    }

    /// Neighbours of `cell` across interior faces. Boundary faces carry no flux.
    pub(crate) fn for_each_neighbor(&self, cell: usize, mut f: impl FnMut(usize)) {
        let n = self.n;
        let ix = cell % n;
        if ix > 0 {
            f(cell - 1);
        }
        if ix + 1 < n {
            f(cell + 1);
        }
        if self.dim == 2 {
            let iy = cell / n;
            if iy > 0 {
                f(cell - n);
            }
            if iy + 1 < n {
                f(cell + n);
            }
        }
    }

    /// Offset between a cell and its farthest neighbour in the linear numbering.
    pub(crate) fn stencil_reach(&self) -> usize {
        if self.dim == 1 {
            1
        } else {
            self.n
        }
    }
}

/// Cell-centered scalar field.
#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize))]
pub struct Field {
    grid: Grid,
    values: Vec<f64>,
}

impl Field {
    pub fn zeros(grid: Grid) -> Self {
        Self::constant(grid, 0.0)
    }

    pub fn constant(grid: Grid, c: f64) -> Self {
        Field {
            grid,
            values: alloc::vec![c; grid.cells()],
        }
    }

    pub fn from_fn(grid: Grid, f: impl Fn([f64; 2]) -> f64) -> Self {
        let values = (0..grid.cells()).map(|c| f(grid.center(c))).collect();
        Field { grid, values }
    }

    pub fn from_values(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cells() {
            return Err(Error::GridMismatch);
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite { what: "field" });
        }
        Ok(Field { grid, values })
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn is_finite(&self) -> bool {
        self.values.iter().all(|v| v.is_finite())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Field {
        Field {
            grid: self.grid,
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }

    /// Cellwise `f(a, b)`. Fails on grid mismatch.
    pub fn zip_with(&self, other: &Field, f: impl Fn(f64, f64) -> f64) -> Result<Field> {
        if self.grid != other.grid {
            return Err(Error::GridMismatch);
        }
        Ok(Field {
            grid: self.grid,
            values: self
                .values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        })
    }

    /// `a·x + b·y`.
    pub fn lincomb(a: f64, x: &Field, b: f64, y: &Field) -> Result<Field> {
        x.zip_with(y, |u, v| a * u + b * v)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }
}

// The arithmetic operators panic on grid mismatch; use `zip_with` for a fallible version.
impl Add for &Field {
    type Output = Field;
    fn add(self, rhs: &Field) -> Field {
        self.zip_with(rhs, |a, b| a + b).expect("grid mismatch in Field + Field")
    }
}

impl Sub for &Field {
    type Output = Field;
    fn sub(self, rhs: &Field) -> Field {
        self.zip_with(rhs, |a, b| a - b).expect("grid mismatch in Field - Field")
    }
}

impl Mul<f64> for &Field {
    type Output = Field;
    fn mul(self, s: f64) -> Field {
        self.map(|v| v * s)
    }
}
