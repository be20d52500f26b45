use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::norm_sq;
use crate::error::{invalid, Result};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Dense complex vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComplexVector(Vec<Complex64>);

impl ComplexVector {
    pub fn new(entries: Vec<Complex64>) -> Self {
        ComplexVector(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        ComplexVector(vec![ZERO; dim])
    }

    pub fn from_real(entries: &[f64]) -> Self {
        ComplexVector(entries.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn as_mut_slice(&mut self) -> &mut [Complex64] {
        &mut self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }

    pub fn norm_sq(&self) -> f64 {
        norm_sq(&self.0)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|z| z.re.is_finite() && z.im.is_finite())
    }
}

impl From<Vec<Complex64>> for ComplexVector {
    fn from(v: Vec<Complex64>) -> Self {
        ComplexVector(v)
    }
}

impl std::ops::Index<usize> for ComplexVector {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.0[i]
    }
}

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries. Rejects length mismatches and
    /// non-finite entries.
    pub fn new(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(invalid(format!("matrix data has {} entries, expected {rows}x{cols}", data.len())));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(invalid("matrix has non-finite entries"));
        }
        Ok(ComplexMatrix { rows, cols, data })
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::new(rows, cols, data.iter().map(|&r| Complex64::new(r, 0.0)).collect())
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        ComplexMatrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = ONE;
        }
        m
    }

    pub(crate) fn from_raw(rows: usize, cols: usize, data: Vec<Complex64>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        ComplexMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn column(&self, c: usize) -> ComplexVector {
        ComplexVector((0..self.rows).map(|r| self.get(r, c)).collect())
    }

    pub fn frobenius_norm(&self) -> f64 {
        norm_sq(&self.data).sqrt()
    }

    pub fn conj_transpose(&self) -> ComplexMatrix {
        let mut out = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                out.data[c * self.rows + r] = self.get(r, c).conj();
            }
        }
        out
    }

    pub fn matmul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(invalid(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                for c in 0..other.cols {
                    out.data[r * other.cols + c] += a * other.get(k, c);
                }
            }
        }
        Ok(out)
    }

    /// `self * x`.
    pub fn mul_vec(&self, x: &[Complex64]) -> Result<Vec<Complex64>> {
        if x.len() != self.cols {
            return Err(invalid(format!(
                "vector of dim {} does not conform to {}x{} matrix",
                x.len(),
                self.rows,
                self.cols
            )));
        }
        Ok((0..self.rows)
            .map(|r| {
                let row = &self.data[r * self.cols..(r + 1) * self.cols];
                row.iter().zip(x).map(|(a, b)| a * b).sum()
            })
            .collect())
    }

    /// `self^H * y`.
    pub fn conj_transpose_mul_vec(&self, y: &[Complex64]) -> Result<Vec<Complex64>> {
        if y.len() != self.rows {
            return Err(invalid(format!(
                "vector of dim {} does not conform to ({}x{})^H",
                y.len(),
                self.rows,
                self.cols
            )));
        }
        let mut out = vec![ZERO; self.cols];
        for (r, yr) in y.iter().enumerate() {
            for (c, o) in out.iter_mut().enumerate() {
                *o += self.get(r, c).conj() * yr;
            }
        }
        Ok(out)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.shape() != other.shape() {
            return Err(invalid("matrix shapes differ"));
        }
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        Ok(ComplexMatrix::from_raw(self.rows, self.cols, data))
    }

    pub fn is_upper_triangular(&self, tol: f64) -> bool {
        (0..self.rows).all(|r| (0..self.cols.min(r)).all(|c| self.get(r, c).norm() <= tol))
    }
}
