//! Seeded generation of functions in the unit ball of `H^inf(D, B(C^d))`.
//!
//! Two generators are provided:
//!
//! * [`sample_schur_scalar`] runs the Schur algorithm backwards from random
//!   Schur parameters `|gamma_k| <= 0.95`, producing a scalar Schur function,
//!   then truncates it.
//! * [`sample_matrix_contractive`] draws a Gaussian matrix polynomial with a
//!   scalar constant term and normalizes it by a certified sup bound.
//!
//! Truncated polynomials are certified with the Bernstein inequality: for a
//! polynomial `P` of degree `D`, `sup_{|z|=1} ||P|| <= grid_max / (1 - pi D / M)`
//! when `M > pi D` equally spaced points are used.
//!
//! Each sample index owns its own ChaCha8 stream (`seed`, stream = index),
//! so sets are reproducible regardless of how work is scheduled.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, BohrError, Result};
use crate::linalg::{operator_norm, scalar_embed, ComplexMatrix};
use crate::series::{MatrixSeries1D, ScalarSeries};

/// Identifier of the random stream algorithm recorded in manifests.
pub const RNG_ALGORITHM: &str = "chacha8-rand_chacha-0.9/v1";

/// Schur parameters are drawn from the disk of this radius.
pub const SCHUR_PARAMETER_RADIUS: f64 = 0.95;

/// Default extra shrink on top of the Bernstein factor.
pub const DEFAULT_SAFETY: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SamplerConfig {
    pub seed: u64,
    pub dim: usize,
    pub degree: usize,
    /// Number of Schur parameters.
    pub depth: usize,
    /// Circle points used for certification.
    pub grid: usize,
    /// Multiplicative safety margin applied after the Bernstein factor.
    pub safety: f64,
}

impl SamplerConfig {
    /// Defaults: depth 4, `grid = max(256, ceil(4 pi D))`.
    pub fn new(seed: u64, dim: usize, degree: usize) -> Self {
        Self {
            seed,
            dim,
            degree,
            depth: 4,
            grid: default_grid(degree),
            safety: DEFAULT_SAFETY,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(invalid("dim", "must be positive"));
        }
        if self.depth == 0 {
            return Err(invalid("depth", "must be at least 1"));
        }
        if !(self.safety > 0.0) {
            return Err(invalid("safety", "must be positive"));
        }
        if self.grid as f64 <= PI * self.degree as f64 {
            return Err(BohrError::GridTooCoarse {
                grid: self.grid,
                degree: self.degree,
            });
        }
        Ok(())
    }

    /// `(1 + safety) / (1 - pi D / M)`.
    pub fn certification_factor(&self) -> f64 {
        bernstein_factor(self.degree, self.grid) * (1.0 + self.safety)
    }

    fn rng(&self, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        rng.set_stream(stream);
        rng
    }
}

/// `max(256, ceil(4 pi D))`.
pub fn default_grid(degree: usize) -> usize {
    256usize.max((4.0 * PI * degree as f64).ceil() as usize)
}

/// `1 / (1 - pi D / M)`.
pub fn bernstein_factor(degree: usize, grid: usize) -> f64 {
    1.0 / (1.0 - PI * degree as f64 / grid as f64)
}

/// Certified upper bound on `sup_{|z| = 1} ||f(z)||` for the polynomial `f`.
pub fn certified_sup_bound(f: &MatrixSeries1D, grid: usize) -> Result<f64> {
    if grid as f64 <= PI * f.degree() as f64 {
        return Err(BohrError::GridTooCoarse {
            grid,
            degree: f.degree(),
        });
    }
    Ok(grid_sup(f, grid) * bernstein_factor(f.degree(), grid))
}

/// Largest `||f(z)||` over `grid` points of the unit circle.
pub fn grid_sup(f: &MatrixSeries1D, grid: usize) -> f64 {
    f.circle_max(1.0, grid).0
}

fn sample_disk(rng: &mut ChaCha8Rng, radius: f64) -> Complex64 {
    let rho = radius * rng.random::<f64>().sqrt();
    let phi = 2.0 * PI * rng.random::<f64>();
    Complex64::from_polar(rho, phi)
}

fn gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Taylor coefficients through `degree` of the Schur function with
/// parameters `gammas`:
/// `f_k = (gamma_k + z f_{k+1}) / (1 + conj(gamma_k) z f_{k+1})`,
/// with the innermost function the constant `gamma_last`.
pub fn schur_series(gammas: &[Complex64], degree: usize) -> Result<ScalarSeries> {
    let (&last, rest) = gammas
        .split_last()
        .ok_or_else(|| invalid("gammas", "at least one Schur parameter required"))?;
    if let Some(g) = gammas.iter().find(|g| !(g.norm() < 1.0)) {
        return Err(invalid(
            "gammas",
            format!("|gamma| = {} is not < 1", g.norm()),
        ));
    }
    let one = ScalarSeries::constant(Complex64::new(1.0, 0.0));
    let mut f = ScalarSeries::constant(last);
    for &g in rest.iter().rev() {
        let zf = f.shift_up(degree);
        let num = ScalarSeries::constant(g).add(&zf);
        let den = one.add(&zf.scale(g.conj()));
        f = num.div(&den, degree)?;
    }
    let mut coeffs = f.0;
    coeffs.resize(degree + 1, Complex64::new(0.0, 0.0));
    Ok(ScalarSeries(coeffs))
}

/// Scalar Schur sample (dimension 1). Rescaled only if the certified sup of
/// the truncation exceeds one.
pub fn sample_schur_scalar(cfg: &SamplerConfig, stream: u64) -> Result<MatrixSeries1D> {
    cfg.validate()?;
    let mut rng = cfg.rng(stream);
    let gammas: Vec<Complex64> = (0..cfg.depth)
        .map(|_| sample_disk(&mut rng, SCHUR_PARAMETER_RADIUS))
        .collect();
    let f = schur_series(&gammas, cfg.degree)?.embed(1);
    let bound = grid_sup(&f, cfg.grid) * cfg.certification_factor();
    Ok(if bound > 1.0 {
        f.scale(Complex64::new(1.0 / bound, 0.0))
    } else {
        f
    })
}

/// Gaussian matrix polynomial with scalarized head, divided by its certified sup.
pub fn sample_matrix_contractive(cfg: &SamplerConfig, stream: u64) -> Result<MatrixSeries1D> {
    cfg.validate()?;
    let mut rng = cfg.rng(stream);
    let d = cfg.dim;
    let mut coeffs: Vec<ComplexMatrix> = (0..=cfg.degree)
        .map(|_| ComplexMatrix::from_fn(d, |_, _| gaussian(&mut rng)))
        .collect();
    coeffs[0] = scalar_embed(coeffs[0].trace() / d as f64, d);
    let p = MatrixSeries1D::new(coeffs)?;
    let s = grid_sup(&p, cfg.grid);
    if s == 0.0 {
        return Ok(p);
    }
    Ok(
        p.scale(Complex64::new(1.0 / (s * cfg.certification_factor()), 0.0))
            .exact(),
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleKind {
    MatrixContractive,
    SchurScalar,
}

impl SampleKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::MatrixContractive => "matrix-contractive",
            Self::SchurScalar => "schur-scalar",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    pub index: usize,
    pub kind: SampleKind,
    pub series: MatrixSeries1D,
}

/// `count` samples alternating between the matrix generator (even indices)
/// and embedded Schur scalars (odd indices), cycling through `dims`.
pub fn sample_set(base: &SamplerConfig, count: usize, dims: &[usize]) -> Result<Vec<Sample>> {
    if dims.is_empty() {
        return Err(invalid("dims", "at least one dimension required"));
    }
    (0..count)
        .into_par_iter()
        .map(|index| {
            let cfg = SamplerConfig {
                dim: dims[index % dims.len()],
                ..*base
            };
            let (kind, series) = if index % 2 == 0 {
                (
                    SampleKind::MatrixContractive,
                    sample_matrix_contractive(&cfg, index as u64)?,
                )
            } else {
                let scalar = sample_schur_scalar(&cfg, index as u64)?;
                let coeffs: Vec<Complex64> = scalar.coeffs().iter().map(|m| m.get(0, 0)).collect();
                (
                    SampleKind::SchurScalar,
                    MatrixSeries1D::from_scalar(&coeffs, cfg.dim)?,
                )
            };
            Ok(Sample {
                index,
                kind,
                series,
            })
        })
        .collect()
}

/// `diag(z, z^2)`: unit sup norm, zero head, `sum ||A_k||^2 = 2`.
pub fn adversarial_diag_witness() -> MatrixSeries1D {
    diag_monomial_witness(2)
}

/// `diag(z, z^2, ..., z^d)`.
pub fn diag_monomial_witness(d: usize) -> MatrixSeries1D {
    assert!(d >= 1);
    let coeffs = (0..=d)
        .map(|k| {
            ComplexMatrix::from_fn(d, |i, j| {
                if i == j && i + 1 == k {
                    Complex64::new(1.0, 0.0)
                } else {
                    Complex64::new(0.0, 0.0)
                }
            })
        })
        .collect();
    MatrixSeries1D::new(coeffs).expect("well formed").exact()
}

/// `sum_k ||A_k||^2`.
pub fn coefficient_square_sum(f: &MatrixSeries1D) -> f64 {
    f.coeff_norms().iter().map(|n| n * n).sum()
}

pub const MANIFEST_SCHEMA_VERSION: u32 = 1;

/// Row-major `[re, im]` pairs of one matrix.
pub type MatrixRecord = Vec<[f64; 2]>;

pub fn matrix_to_record(m: &ComplexMatrix) -> MatrixRecord {
    m.entries().iter().map(|z| [z.re, z.im]).collect()
}

pub fn matrix_from_record(dim: usize, rec: &MatrixRecord) -> Result<ComplexMatrix> {
    ComplexMatrix::from_row_major(
        dim,
        rec.iter().map(|&[re, im]| Complex64::new(re, im)).collect(),
    )
    .map_err(|e| BohrError::Manifest(e.to_string()))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleRecord {
    pub index: usize,
    pub kind: SampleKind,
    pub dim: usize,
    pub degree: usize,
    pub coeffs: Vec<MatrixRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleManifest {
    pub schema_version: u32,
    pub rng: String,
    pub seed: u64,
    pub config: SamplerConfig,
    pub dims: Vec<usize>,
    pub samples: Vec<SampleRecord>,
}

impl SampleManifest {
    pub fn from_samples(config: &SamplerConfig, dims: &[usize], samples: &[Sample]) -> Self {
        Self {
            schema_version: MANIFEST_SCHEMA_VERSION,
            rng: RNG_ALGORITHM.to_string(),
            seed: config.seed,
            config: *config,
            dims: dims.to_vec(),
            samples: samples
                .iter()
                .map(|s| SampleRecord {
                    index: s.index,
                    kind: s.kind,
                    dim: s.series.dim(),
                    degree: s.series.degree(),
                    coeffs: s.series.coeffs().iter().map(matrix_to_record).collect(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: Self = serde_json::from_str(text).map_err(|e| BohrError::Manifest(e.to_string()))?;
        if m.schema_version != MANIFEST_SCHEMA_VERSION {
            return Err(BohrError::Manifest(format!(
                "unsupported schema version {}",
                m.schema_version
            )));
        }
        Ok(m)
    }

    pub fn samples(&self) -> Result<Vec<Sample>> {
        self.samples
            .iter()
            .map(|rec| {
                if rec.coeffs.len() != rec.degree + 1 {
                    return Err(BohrError::Manifest(format!(
                        "sample {} declares degree {} but has {} coefficients",
                        rec.index,
                        rec.degree,
                        rec.coeffs.len()
                    )));
                }
                let coeffs = rec
                    .coeffs
                    .iter()
                    .map(|c| matrix_from_record(rec.dim, c))
                    .collect::<Result<Vec<_>>>()?;
                let series = MatrixSeries1D::new(coeffs)?;
                Ok(Sample {
                    index: rec.index,
                    kind: rec.kind,
                    series: match rec.kind {
                        SampleKind::MatrixContractive => series.exact(),
                        SampleKind::SchurScalar => series,
                    },
                })
            })
            .collect()
    }

    /// Regenerates the set from the recorded seed and config.
    pub fn replay(&self) -> Result<Vec<Sample>> {
        sample_set(&self.config, self.samples.len(), &self.dims)
    }
}

/// Norm of `f(z)` for every grid point of a circle of radius `r`.
pub fn circle_norms(f: &MatrixSeries1D, r: f64, grid: usize) -> Vec<f64> {
    (0..grid)
        .map(|k| operator_norm(&f.eval_unchecked(crate::series::circle_point(r, k, grid))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schur_base_cases() {
        let zero = schur_series(&[Complex64::new(0.0, 0.0)], 8).unwrap();
        assert!(zero.coeffs().iter().all(|c| c.norm() == 0.0));
        let konst = schur_series(&[Complex64::new(0.4, 0.0)], 8).unwrap();
        assert_eq!(konst.coeffs()[0], Complex64::new(0.4, 0.0));
        assert!(konst.coeffs()[1..].iter().all(|c| c.norm() == 0.0));
    }

    #[test]
    fn schur_two_parameters_is_mobius_composition() {
        // f = (g + z c) / (1 + conj(g) z c) with the constant tail c.
        let g = Complex64::new(0.3, 0.2);
        let c = Complex64::new(-0.5, 0.1);
        let f = schur_series(&[g, c], 20).unwrap();
        for z in [Complex64::new(0.3, 0.1), Complex64::new(-0.2, 0.4)] {
            let exact = (g + z * c) / (Complex64::new(1.0, 0.0) + g.conj() * z * c);
            assert!((f.eval(z) - exact).norm() < 1e-9);
        }
    }

    #[test]
    fn schur_rejects_bad_parameters() {
        assert!(schur_series(&[], 4).is_err());
        assert!(schur_series(&[Complex64::new(1.0, 0.0)], 4).is_err());
    }

    #[test]
    fn coarse_grid_rejected() {
        let mut cfg = SamplerConfig::new(1, 2, 32);
        cfg.grid = 100;
        assert!(matches!(
            sample_matrix_contractive(&cfg, 0),
            Err(BohrError::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn default_grid_factor() {
        assert_eq!(default_grid(10), 256);
        assert_eq!(default_grid(32), 403);
        assert!(bernstein_factor(32, default_grid(32)) <= 4.0 / 3.0 + 1e-12);
    }

    #[test]
    fn degree_zero_matrix_sample_is_scalar_and_contractive() {
        let cfg = SamplerConfig::new(5, 3, 0);
        let f = sample_matrix_contractive(&cfg, 0).unwrap();
        assert!(f.scalar_head().present);
        let n = f.coeff_norms()[0];
        assert!(n < 1.0 && n > 0.99, "{n}");
    }

    #[test]
    fn diag_witness_square_sum() {
        let w = adversarial_diag_witness();
        assert_eq!(coefficient_square_sum(&w), 2.0);
        assert!((grid_sup(&w, 256) - 1.0).abs() < 1e-15);
        assert!(w.scalar_head().present);
    }

    #[test]
    fn same_seed_same_sample() {
        let cfg = SamplerConfig::new(42, 2, 8);
        assert_eq!(
            sample_matrix_contractive(&cfg, 3).unwrap(),
            sample_matrix_contractive(&cfg, 3).unwrap()
        );
        assert_ne!(
            sample_matrix_contractive(&cfg, 3).unwrap(),
            sample_matrix_contractive(&cfg, 4).unwrap()
        );
    }

    #[test]
    fn manifest_round_trip() {
        let cfg = SamplerConfig::new(9, 2, 6);
        let set = sample_set(&cfg, 5, &[1, 2]).unwrap();
        let m = SampleManifest::from_samples(&cfg, &[1, 2], &set);
        let back = SampleManifest::from_json(&m.to_json()).unwrap();
        assert_eq!(back.samples().unwrap(), set);
        assert_eq!(back.replay().unwrap(), set);
    }

    #[test]
    fn manifest_rejects_wrong_schema() {
        let cfg = SamplerConfig::new(9, 1, 2);
        let mut m = SampleManifest::from_samples(&cfg, &[1], &[]);
        m.schema_version = 99;
        assert!(SampleManifest::from_json(&m.to_json()).is_err());
    }
}
