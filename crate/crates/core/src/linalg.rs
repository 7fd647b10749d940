//! Dense complex matrices and the operator (spectral) norm.
//!
//! Every coefficient `A_k` and every value `f(z)` in the laboratory is a
//! [`ComplexMatrix`]. The operator norm is the largest singular value,
//! taken from nalgebra's SVD.

use std::fmt;

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{BohrError, Result};

/// Square `d x d` complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[Complex64]> = self.data.chunks(self.dim).collect();
        f.debug_struct("ComplexMatrix")
            .field("dim", &self.dim)
            .field("rows", &rows)
            .finish()
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        Self {
            dim,
            data: vec![Complex64::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        scalar_embed(Complex64::new(1.0, 0.0), dim)
    }

    /// Builds a matrix from row-major entries.
    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(BohrError::EmptyDimension);
        }
        if data.len() != dim * dim {
            return Err(BohrError::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { dim, data })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(BohrError::DimensionMismatch {
                    expected: dim,
                    found: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Self::from_row_major(dim, data)
    }

    pub fn from_fn(dim: usize, mut entry: impl FnMut(usize, usize) -> Complex64) -> Self {
        assert!(dim >= 1, "matrix dimension must be at least 1");
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(entry(i, j));
            }
        }
        Self { dim, data }
    }

    pub fn diagonal(entries: &[Complex64]) -> Result<Self> {
        if entries.is_empty() {
            return Err(BohrError::EmptyDimension);
        }
        let dim = entries.len();
        Ok(Self::from_fn(dim, |i, j| {
            if i == j {
                entries[i]
            } else {
                Complex64::new(0.0, 0.0)
            }
        }))
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.data[i * self.dim + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.data
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let d = self.dim;
        Self::from_fn(d, |i, j| self.data[j * d + i].conj())
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self {
            dim: self.dim,
            data: self.data.iter().map(|&x| x * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let d = self.dim;
        let mut data = vec![Complex64::new(0.0, 0.0); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                for j in 0..d {
                    data[i * d + j] += a * other.data[k * d + j];
                }
            }
        }
        Ok(Self { dim: d, data })
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Largest entrywise modulus.
    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Largest entrywise distance to `a * I`.
    pub fn distance_to_scalar(&self, a: Complex64) -> f64 {
        let d = self.dim;
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let target = if i == j { a } else { Complex64::new(0.0, 0.0) };
                worst = worst.max((self.data[i * d + j] - target).norm());
            }
        }
        worst
    }

    pub fn operator_norm(&self) -> f64 {
        operator_norm(self)
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim == other.dim {
            Ok(())
        } else {
            Err(BohrError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            })
        }
    }

    /// `self = self * z + other`, used by Horner evaluation.
    pub(crate) fn horner_step(&mut self, z: Complex64, other: &Self) {
        for (acc, &c) in self.data.iter_mut().zip(&other.data) {
            *acc = *acc * z + c;
        }
    }

    pub(crate) fn add_scaled_assign(&mut self, other: &Self, s: Complex64) {
        for (acc, &c) in self.data.iter_mut().zip(&other.data) {
            *acc += c * s;
        }
    }
}

/// `a * I` of dimension `dim`.
pub fn scalar_embed(a: Complex64, dim: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(
        dim,
        |i, j| {
            if i == j {
                a
            } else {
                Complex64::new(0.0, 0.0)
            }
        },
    )
}

pub fn adjoint(m: &ComplexMatrix) -> ComplexMatrix {
    m.adjoint()
}

/// Largest singular value of `m`.
pub fn operator_norm(m: &ComplexMatrix) -> f64 {
    let d = m.dim;
    if d == 1 {
        return m.data[0].norm();
    }
    DMatrix::from_row_slice(d, d, &m.data)
        .singular_values()
        .iter()
        .fold(0.0, |acc: f64, &s| acc.max(s))
}
