//! Truncated one-variable power series with matrix coefficients.
//!
//! A [`MatrixSeries1D`] stores `A_0..A_D` and caches their operator norms,
//! since almost every functional in the crate (majorant, tail, area, the
//! Schwarz-Pick margin) consumes `||A_k||` rather than the matrices
//! themselves. [`ScalarSeries`] is the scalar counterpart used by the Schur
//! sampler, which needs division.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{check_radius, invalid, BohrError, Result};
use crate::linalg::{operator_norm, scalar_embed, ComplexMatrix};

/// Default truncation degree.
pub const DEFAULT_DEGREE: usize = 64;

/// Entrywise tolerance for recognizing `A_0 = a_0 I`.
pub const SCALAR_HEAD_TOL: f64 = 1e-12;

/// Default number of circle points for sup-norm grids.
pub const DEFAULT_GRID: usize = 256;

/// `f(z) = sum_k A_k z^k`, truncated at degree `D`.
///
/// By default the stored coefficients are read as the head of a longer
/// series, and every certified check pads its sums with a bound on the
/// discarded tail. A series marked [`exact`](Self::exact) is the whole
/// function (a polynomial), and its tail is zero.
#[derive(Debug, Clone, PartialEq)]
pub struct MatrixSeries1D {
    dim: usize,
    coeffs: Vec<ComplexMatrix>,
    norms: Vec<f64>,
    exact: bool,
}

/// Result of testing whether `A_0` is a scalar multiple of the identity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarHead {
    pub a0: Complex64,
    pub present: bool,
}

impl MatrixSeries1D {
    pub fn new(coeffs: Vec<ComplexMatrix>) -> Result<Self> {
        let dim = coeffs.first().ok_or(BohrError::EmptyDimension)?.dim();
        if let Some(bad) = coeffs.iter().find(|m| m.dim() != dim) {
            return Err(BohrError::DimensionMismatch {
                expected: dim,
                found: bad.dim(),
            });
        }
        let norms = coeffs.iter().map(operator_norm).collect();
        Ok(Self {
            dim,
            coeffs,
            norms,
            exact: false,
        })
    }

    /// Constant function `A_0` (exact).
    pub fn constant(a0: ComplexMatrix) -> Self {
        Self::new(vec![a0])
            .expect("single coefficient is well formed")
            .exact()
    }

    /// Marks the series as a polynomial with no discarded tail.
    pub fn exact(mut self) -> Self {
        self.exact = true;
        self
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    /// Tail bound `coeff_bound r^{D+1} / (1 - r)`, or zero for exact series.
    pub fn majorant_pad(&self, coeff_bound: f64, r: f64) -> f64 {
        if self.exact {
            0.0
        } else {
            majorant_tail_pad(coeff_bound, r, self.degree())
        }
    }

    pub fn square_pad(&self, coeff_bound: f64, r: f64) -> f64 {
        if self.exact {
            0.0
        } else {
            square_tail_pad(coeff_bound, r, self.degree())
        }
    }

    pub fn area_pad(&self, coeff_bound: f64, r: f64) -> f64 {
        if self.exact {
            0.0
        } else {
            area_tail_pad(coeff_bound, r, self.degree())
        }
    }

    /// `sum_k c_k z^k * I` for scalar coefficients `c_k`.
    pub fn from_scalar(coeffs: &[Complex64], dim: usize) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("coeffs", "at least one coefficient required"));
        }
        Self::new(coeffs.iter().map(|&c| scalar_embed(c, dim)).collect())
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[ComplexMatrix] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Option<&ComplexMatrix> {
        self.coeffs.get(k)
    }

    /// `||A_k||` for every stored coefficient.
    pub fn coeff_norms(&self) -> &[f64] {
        &self.norms
    }

    pub fn scalar_head(&self) -> ScalarHead {
        let a0 = self.coeffs[0].trace() / self.dim as f64;
        ScalarHead {
            a0,
            present: self.coeffs[0].distance_to_scalar(a0) <= SCALAR_HEAD_TOL,
        }
    }

    /// `a_0` when the head is scalar and strictly inside the disk.
    pub fn require_scalar_head(&self) -> Result<Complex64> {
        let head = self.scalar_head();
        if !head.present {
            return Err(BohrError::NonScalarHead);
        }
        if head.a0.norm() >= 1.0 {
            return Err(BohrError::HeadNotContractive(head.a0.norm()));
        }
        Ok(head.a0)
    }

    /// Multiplies every coefficient by `s`.
    pub fn scale(&self, s: Complex64) -> Self {
        let mut out =
            Self::new(self.coeffs.iter().map(|m| m.scale(s)).collect()).expect("same shape");
        out.exact = self.exact;
        out
    }

    /// `z * f(z)`: shifts coefficients up by one degree.
    pub fn shift_up(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(ComplexMatrix::zeros(self.dim));
        coeffs.extend(self.coeffs.iter().cloned());
        let mut out = Self::new(coeffs).expect("same shape");
        out.exact = self.exact;
        out
    }

    /// Horner evaluation; `|z| <= 1` is required.
    pub fn eval(&self, z: Complex64) -> Result<ComplexMatrix> {
        if !(z.norm() <= 1.0) {
            return Err(BohrError::OutsideDisk { modulus: z.norm() });
        }
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex64) -> ComplexMatrix {
        let mut iter = self.coeffs.iter().rev();
        let mut acc = iter.next().expect("nonempty").clone();
        for c in iter {
            acc.horner_step(z, c);
        }
        acc
    }

    /// Majorant series `M_r(f) = sum_k ||A_k|| r^k`.
    pub fn majorant(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(weighted_sum(&self.norms, r, 0))
    }

    /// `sum_{k >= n} ||A_k|| r^k`.
    pub fn tail_majorant(&self, r: f64, n: usize) -> Result<f64> {
        check_radius(r)?;
        if n == 0 {
            return Err(BohrError::ZeroTailIndex);
        }
        Ok(weighted_sum(&self.norms, r, n))
    }

    /// `S = sum_{k >= 1} k ||A_k||^2 r^{2k}`.
    pub fn area_functional(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        let r2 = r * r;
        let mut pow = 1.0;
        let mut sum = 0.0;
        for (k, &n) in self.norms.iter().enumerate().skip(1) {
            pow *= r2;
            sum += k as f64 * n * n * pow;
        }
        Ok(sum)
    }

    /// `sum_{k >= 1} ||A_k||^2 r^{2k}`.
    pub fn square_sum(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        let r2 = r * r;
        let mut pow = 1.0;
        let mut sum = 0.0;
        for &n in self.norms.iter().skip(1) {
            pow *= r2;
            sum += n * n * pow;
        }
        Ok(sum)
    }

    /// `sum_{k >= 1} k ||A_k|| r^k`, i.e. `r` times the derivative majorant.
    pub fn derivative_majorant(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        let mut pow = 1.0;
        let mut sum = 0.0;
        for (k, &n) in self.norms.iter().enumerate().skip(1) {
            pow *= r;
            sum += k as f64 * n * pow;
        }
        Ok(sum)
    }

    /// `(1 - |a_0|^2) - max_{n >= 1} ||A_n||`; nonnegative when the
    /// Schwarz-Pick coefficient bound holds.
    pub fn schwarz_pick_margin(&self) -> Result<f64> {
        let a0 = self.require_scalar_head()?;
        let worst = self.norms.iter().skip(1).copied().fold(0.0, f64::max);
        Ok((1.0 - a0.norm_sqr()) - worst)
    }

    /// Minimum over `z = r e^{i theta}` of the Lindelof gap
    /// `(||f(0)|| + r)/(1 + ||f(0)|| r) - ||f(z)||`.
    pub fn growth_bound_margin(&self, r: f64, grid: usize) -> Result<f64> {
        check_radius(r)?;
        if grid < 8 {
            return Err(invalid("grid", "at least 8 points required"));
        }
        self.require_scalar_head()?;
        let head = self.norms[0];
        let bound = (head + r) / (1.0 + head * r);
        let (max, _) = self.circle_max(r, grid);
        Ok(bound - max)
    }

    /// Largest `||f(z)||` over `grid` equally spaced points of `|z| = r`,
    /// together with the maximizing point. Point `k` is `r e^{2 pi i k / grid}`.
    pub fn circle_max(&self, r: f64, grid: usize) -> (f64, Complex64) {
        let mut best = (f64::NEG_INFINITY, Complex64::new(r, 0.0));
        for k in 0..grid {
            let z = circle_point(r, k, grid);
            let v = operator_norm(&self.eval_unchecked(z));
            if v > best.0 {
                best = (v, z);
            }
        }
        best
    }

    /// Cauchy product truncated at `max_degree`; exact only when both factors
    /// are exact and nothing is cut off.
    pub fn mul(&self, other: &Self, max_degree: usize) -> Result<Self> {
        if self.dim != other.dim {
            return Err(BohrError::DimensionMismatch {
                expected: self.dim,
                found: other.dim,
            });
        }
        let deg = (self.degree() + other.degree()).min(max_degree);
        let mut out = vec![ComplexMatrix::zeros(self.dim); deg + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(deg + 1) {
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > deg {
                    break;
                }
                let prod = a.matmul(b)?;
                out[i + j].add_scaled_assign(&prod, Complex64::new(1.0, 0.0));
            }
        }
        let mut series = Self::new(out)?;
        series.exact = self.exact && other.exact && self.degree() + other.degree() <= max_degree;
        Ok(series)
    }
}

/// `r e^{2 pi i k / grid}`.
pub fn circle_point(r: f64, k: usize, grid: usize) -> Complex64 {
    Complex64::from_polar(r, 2.0 * PI * k as f64 / grid as f64)
}

fn weighted_sum(norms: &[f64], r: f64, from: usize) -> f64 {
    let mut pow = 1.0;
    let mut sum = 0.0;
    for (k, &n) in norms.iter().enumerate() {
        if k >= from {
            sum += n * pow;
        }
        pow *= r;
    }
    sum
}

/// Scalar truncated power series `sum_k c_k z^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarSeries(pub Vec<Complex64>);

impl ScalarSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("coeffs", "at least one coefficient required"));
        }
        Ok(Self(coeffs))
    }

    pub fn constant(c: Complex64) -> Self {
        Self(vec![c])
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn degree(&self) -> usize {
        self.0.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.0
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.0
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c)
    }

    pub fn scale(&self, s: Complex64) -> Self {
        Self(self.0.iter().map(|&c| c * s).collect())
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.0.len().max(other.0.len());
        let zero = Complex64::new(0.0, 0.0);
        Self(
            (0..n)
                .map(|k| {
                    self.0.get(k).copied().unwrap_or(zero) + other.0.get(k).copied().unwrap_or(zero)
                })
                .collect(),
        )
    }

    /// `z * f(z)` truncated at `max_degree`.
    pub fn shift_up(&self, max_degree: usize) -> Self {
        let mut v = Vec::with_capacity(self.0.len() + 1);
        v.push(Complex64::new(0.0, 0.0));
        v.extend_from_slice(&self.0);
        v.truncate(max_degree + 1);
        Self(v)
    }

    /// Cauchy product truncated at `min(deg f + deg g, max_degree)`.
    pub fn mul(&self, other: &Self, max_degree: usize) -> Self {
        let deg = (self.degree() + other.degree()).min(max_degree);
        let mut out = vec![Complex64::new(0.0, 0.0); deg + 1];
        for (i, &a) in self.0.iter().enumerate().take(deg + 1) {
            for (j, &b) in other.0.iter().enumerate().take(deg + 1 - i) {
                out[i + j] += a * b;
            }
        }
        Self(out)
    }

    /// Quotient `h` with `h * other = self` through degree `max_degree`.
    pub fn div(&self, other: &Self, max_degree: usize) -> Result<Self> {
        let g0 = other.0[0];
        if g0.norm() < 1e-9 {
            return Err(BohrError::NearZeroDenominator(g0.norm()));
        }
        let zero = Complex64::new(0.0, 0.0);
        let mut h = Vec::with_capacity(max_degree + 1);
        for n in 0..=max_degree {
            let mut acc = self.0.get(n).copied().unwrap_or(zero);
            for k in 1..=n.min(other.degree()) {
                acc -= other.0[k] * h[n - k];
            }
            h.push(acc / g0);
        }
        Ok(Self(h))
    }

    /// Embeds `sum c_k z^k` as `sum (c_k I) z^k`.
    pub fn embed(&self, dim: usize) -> MatrixSeries1D {
        MatrixSeries1D::from_scalar(&self.0, dim).expect("nonempty")
    }
}

/// Certified bound on the discarded tail of a majorant sum.
///
/// Uses `||A_k|| <= coeff_bound` for `k > D`, so the tail is at most
/// `coeff_bound * r^{D+1} / (1 - r)`.
pub fn majorant_tail_pad(coeff_bound: f64, r: f64, degree: usize) -> f64 {
    coeff_bound * r.powi(degree as i32 + 1) / (1.0 - r)
}

/// Tail bound for `sum_{k > D} ||A_k||^2 r^{2k}`.
pub fn square_tail_pad(coeff_bound: f64, r: f64, degree: usize) -> f64 {
    let x = r * r;
    coeff_bound * coeff_bound * x.powi(degree as i32 + 1) / (1.0 - x)
}

/// Tail bound for `sum_{k > D} k ||A_k||^2 r^{2k}`, using the closed form
/// of `sum_{k > D} k x^k = x^{D+1} ((D+1) - D x) / (1 - x)^2`.
pub fn area_tail_pad(coeff_bound: f64, r: f64, degree: usize) -> f64 {
    let x = r * r;
    let d = degree as f64;
    coeff_bound * coeff_bound * x.powi(degree as i32 + 1) * ((d + 1.0) - d * x)
        / ((1.0 - x) * (1.0 - x))
}
