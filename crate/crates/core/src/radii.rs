//! Radius equations and empirical Bohr-radius estimation.
//!
//! Every equation solved here has a proven sign change and a monotone
//! target, so plain bisection is used throughout.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_radius, invalid, BohrError, Result};
use crate::extremals::bombieri_maximizer;
use crate::series::MatrixSeries1D;

/// Residual tolerance for the radius equations.
pub const RESIDUAL_TOL: f64 = 1e-12;
/// Bracket-width tolerance for the radius equations.
pub const BRACKET_TOL: f64 = 1e-13;

/// Bisection on `[lo, hi]` for a function with `f(lo) > 0 > f(hi)` or the
/// reverse. Stops once `|f(mid)| <= residual_tol` and the bracket is narrower
/// than `width_tol`, or when the bracket cannot shrink any further.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, residual_tol: f64, width_tol: f64) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(invalid("bracket", "endpoints do not straddle a root"));
    }
    let lo_positive = f_lo > 0.0;
    loop {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 || (f_mid.abs() <= residual_tol && hi - lo <= width_tol) {
            return Ok(mid);
        }
        if mid <= lo || mid >= hi {
            return Ok(mid);
        }
        if (f_mid > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Parameters of the equation `2 (1 + r) r^N - p (1 - r)^2 = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadiusQuery {
    pub n: u32,
    pub p: f64,
    pub tol: f64,
}

impl RadiusQuery {
    pub fn new(n: u32, p: f64) -> Result<Self> {
        Self::with_tol(n, p, RESIDUAL_TOL)
    }

    pub fn with_tol(n: u32, p: f64, tol: f64) -> Result<Self> {
        if n == 0 {
            return Err(invalid("N", "must be at least 1"));
        }
        if !(p > 0.0 && p <= 1.0) {
            return Err(invalid("p", format!("{p} is outside (0, 1]")));
        }
        if !(tol >= 1e-14) {
            return Err(invalid("tol", format!("{tol} is below 1e-14")));
        }
        Ok(Self { n, p, tol })
    }
}

/// `Psi(r) = p (1 - r)^2 - 2 r^N (1 + r)`; decreasing on `[0, 1]`.
pub fn psi(n: u32, p: f64, r: f64) -> f64 {
    p * (1.0 - r) * (1.0 - r) - 2.0 * r.powi(n as i32) * (1.0 + r)
}

/// `R_{N,p}`: the unique root of `Psi` in `(0, 1)`.
pub fn solve_rnp(q: RadiusQuery) -> f64 {
    let RadiusQuery { n, p, tol } = q;
    bisect(|r| psi(n, p, r), 0.0, 1.0, tol, BRACKET_TOL)
        .expect("Psi(0) = p > 0 and Psi(1) = -4 < 0")
}

/// `1 / sqrt(1 - r^2)`.
pub fn mchi_upper(r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(1.0 / (1.0 - r * r).sqrt())
}

/// Operative lower bound on `m(chi, r)`: `pi(a_star)` for `r >= 1/3`, `1` below.
pub fn mchi_lower(r: f64) -> Result<f64> {
    check_radius(r)?;
    if r < 1.0 / 3.0 {
        return Ok(1.0);
    }
    Ok(bombieri_maximizer(r)?.1)
}

/// Criterion used by [`bohr_radius_estimate`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EstimateMode {
    /// `sum_k ||A_k|| r^k <= 1` for arbitrary heads.
    Plain,
    /// Same majorant, restricted to `A_0 = 0`.
    ZeroHead,
}

/// Empirical radius: an upper bound of the true radius, since the sample
/// supremum is a lower bound of `m(chi, r)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BohrEstimate {
    pub radius: f64,
    /// `1 - sup_f M_radius(f)`.
    pub sup_margin: f64,
    pub samples: usize,
    pub truncation: usize,
}

pub const ESTIMATE_TOL: f64 = 1e-4;

pub fn bohr_radius_estimate(
    samples: &[MatrixSeries1D],
    mode: EstimateMode,
) -> Result<BohrEstimate> {
    if samples.is_empty() {
        return Err(BohrError::EmptySampleSet);
    }
    if mode == EstimateMode::ZeroHead {
        for f in samples {
            let head = f.coeff_norms()[0];
            if head > 1e-12 {
                return Err(BohrError::NonZeroHead(head));
            }
        }
    }
    let sup = |r: f64| -> f64 {
        samples
            .par_iter()
            .map(|f| f.majorant(r).expect("r in [0, 1)"))
            .reduce(|| f64::NEG_INFINITY, f64::max)
    };
    // Invariant: sup(lo) <= 1; hi is either 1 or a radius where sup > 1.
    let (mut lo, mut hi) = (0.0f64, 1.0f64);
    if sup(0.0) > 1.0 {
        return Err(invalid("samples", "a sample has ||A_0|| > 1"));
    }
    while hi - lo > ESTIMATE_TOL {
        let mid = 0.5 * (lo + hi);
        if sup(mid) <= 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(BohrEstimate {
        radius: lo,
        sup_margin: 1.0 - sup(lo),
        samples: samples.len(),
        truncation: samples.iter().map(|f| f.degree()).max().unwrap_or(0),
    })
}
