//! Banded LU factorization with partial pivoting.
//!
//! Storage follows the LAPACK `gbtrf` layout: column `j` keeps rows
//! `j − (kl + ku) ..= j + kl`, the extra `kl` superdiagonals holding fill-in
//! from row interchanges.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct BandedMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    ldab: usize,
    data: Vec<f64>,
}

impl BandedMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let ldab = 2 * kl + ku + 1;
        BandedMatrix {
            n,
            kl,
            ku,
            ldab,
            data: vec![0.0; ldab * n],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(i + self.kl + self.ku >= j && i <= j + self.kl);
        j * self.ldab + (self.kl + self.ku + i - j)
    }

    fn in_band(&self, i: usize, j: usize) -> bool {
        i < self.n && j < self.n && i <= j + self.kl && j <= i + self.ku
    }

    /// Adds `value` to entry `(i, j)`. Panics if the entry is outside the declared band.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, value: f64) {
        assert!(self.in_band(i, j), "entry ({i}, {j}) outside band");
        let s = self.slot(i, j);
        self.data[s] += value;
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        if self.in_band(i, j) {
            self.data[self.slot(i, j)]
        } else {
            0.0
        }
    }

    /// `y = A x` for the unfactored matrix.
    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.n];
        for (i, yi) in y.iter_mut().enumerate() {
            let lo = i.saturating_sub(self.kl);
            let hi = (i + self.ku).min(self.n - 1);
            *yi = (lo..=hi).map(|j| self.get(i, j) * x[j]).sum();
        }
        y
    }

    pub fn factorize(mut self) -> Result<BandedLu> {
        let n = self.n;
        let kl = self.kl;
        let ku = self.ku;
        let mut pivots = vec![0usize; n];
        let mut ju = 0usize;
        for k in 0..n {
            let last = (k + kl).min(n - 1);
            let mut p = k;
            let mut best = self.data[self.slot(k, k)].abs();
            for i in k + 1..=last {
                let v = self.data[self.slot(i, k)].abs();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > 0.0) || !best.is_finite() {
                return Err(Error::SingularMatrix { row: k });
            }
            pivots[k] = p;
            ju = ju.max((p + ku).min(n - 1));
            if p != k {
                for j in k..=ju {
                    let a = self.slot(k, j);
                    let b = self.slot(p, j);
                    self.data.swap(a, b);
                }
            }
            let pivot = self.data[self.slot(k, k)];
            for i in k + 1..=last {
                let s = self.slot(i, k);
                let l = self.data[s] / pivot;
                self.data[s] = l;
                if l != 0.0 {
                    for j in k + 1..=ju {
                        let u = self.data[self.slot(k, j)];
                        let t = self.slot(i, j);
                        self.data[t] -= l * u;
                    }
                }
            }
        }
        Ok(BandedLu {
            factors: self,
            pivots,
        })
    }
}

/// Factors `P A = L U` of a [`BandedMatrix`].
#[derive(Clone, Debug)]
pub struct BandedLu {
    factors: BandedMatrix,
    pivots: Vec<usize>,
}

impl BandedLu {
    pub fn dim(&self) -> usize {
        self.factors.n
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let a = &self.factors;
        let n = a.n;
        assert_eq!(b.len(), n);
        for k in 0..n {
            let p = self.pivots[k];
            if p != k {
                b.swap(k, p);
            }
            let bk = b[k];
            if bk != 0.0 {
                for i in k + 1..=(k + a.kl).min(n - 1) {
                    b[i] -= a.data[a.slot(i, k)] * bk;
                }
            }
        }
        let width = a.kl + a.ku;
        for k in (0..n).rev() {
            let mut s = b[k];
            for j in k + 1..=(k + width).min(n - 1) {
                s -= a.data[a.slot(k, j)] * b[j];
            }
            b[k] = s / a.data[a.slot(k, k)];
        }
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut x = b.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dense_matvec(a: &[Vec<f64>], x: &[f64]) -> Vec<f64> {
        a.iter()
            .map(|row| row.iter().zip(x).map(|(r, v)| r * v).sum())
            .collect()
    }

    #[test]
    fn solves_system_needing_pivots() {
        // zero diagonal forces row interchanges
        let n = 7;
        let (kl, ku) = (2, 1);
        let mut dense = vec![vec![0.0; n]; n];
        let mut band = BandedMatrix::zeros(n, kl, ku);
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                let v = if i == j {
                    0.0
                } else {
                    1.0 + ((i * 7 + j * 3) % 5) as f64
                };
                dense[i][j] = v;
                band.add(i, j, v);
            }
        }
        let x_true: Vec<f64> = (0..n).map(|i| (i as f64 * 0.37).sin() + 0.5).collect();
        let b = dense_matvec(&dense, &x_true);
        assert_eq!(band.matvec(&x_true), b);
        let lu = band.factorize().unwrap();
        let x = lu.solve(&b);
        for (a, e) in x.iter().zip(&x_true) {
            assert!((a - e).abs() < 1e-12, "{a} vs {e}");
        }
    }

    #[test]
    fn singular_matrix_is_reported() {
        let band = BandedMatrix::zeros(3, 1, 1);
        assert!(matches!(band.factorize(), Err(Error::SingularMatrix { row: 0 })));
    }
}
