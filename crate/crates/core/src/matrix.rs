//! Dense row-major real matrices.
//!
//! Every operator in this crate (Hamiltonians, Pauli strings, density
//! matrices) is real in the computational basis, so a single real storage
//! type is enough.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Dense square matrix of `f64`, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row-major data. Panics if `data.len()` is not a square.
    pub fn from_row_major(dim: usize, data: Vec<f64>) -> Self {
        assert_eq!(
            data.len(),
            dim * dim,
            "row-major data must hold dim^2 entries"
        );
        Self { dim, data }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Self { dim, data }
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    #[inline]
    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// Largest absolute entry.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, x| m.max(x.abs()))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    /// Adds `scale * other` in place.
    pub fn add_scaled(&mut self, other: &Matrix, scale: f64) {
        assert_eq!(self.dim, other.dim);
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += scale * b;
        }
    }

    pub fn scaled(&self, scale: f64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|x| x * scale).collect(),
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Self {
        assert_eq!(self.dim, other.dim);
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            let out_row = &mut out.data[i * n..(i + 1) * n];
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for (o, b) in out_row.iter_mut().zip(&other.data[k * n..(k + 1) * n]) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    /// `vᵀ A v`.
    pub fn quadratic_form(&self, v: &[f64]) -> f64 {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .filter(|&i| v[i] != 0.0)
            .map(|i| v[i] * self.row(i).iter().zip(v).map(|(a, b)| a * b).sum::<f64>())
            .sum()
    }

    /// Largest entry of `|A - B|`.
    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .fold(0.0, |m, (a, b)| m.max((a - b).abs()))
    }

    /// Exact entrywise symmetry.
    pub fn is_symmetric(&self) -> bool {
        (0..self.dim).all(|i| (0..i).all(|j| self[(i, j)] == self[(j, i)]))
    }

    /// Checks symmetry to `rel_tol * max(1, max|A|)`.
    pub fn check_symmetric(&self, rel_tol: f64) -> Result<()> {
        let tol = rel_tol * self.max_abs().max(1.0);
        for i in 0..self.dim {
            for j in 0..i {
                let dev = (self[(i, j)] - self[(j, i)]).abs();
                if dev > tol || dev.is_nan() {
                    return Err(Error::NotSymmetric {
                        row: i,
                        col: j,
                        deviation: dev,
                    });
                }
            }
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}
