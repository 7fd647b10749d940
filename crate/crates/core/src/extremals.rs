//! Closed-form extremal functions.
//!
//! * `psi_a(z) = ((a - z) / (1 - a z)) I`, with coefficients
//!   `A_0 = a I`, `A_k = -(1 - a^2) a^{k-1} I`.
//! * `h(xi) = xi psi_{1/sqrt 2}(xi)`, the zero-constant extremal.
//! * The maximizer of `pi(a) = (a + (1 - 2a^2) r) / (1 - a r)` over `a`.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;

use crate::error::{check_radius, invalid, Result};
use crate::series::{MatrixSeries1D, ScalarSeries};

/// Parameters of a truncated Moebius extremal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusExtremal {
    pub a: f64,
    pub dim: usize,
    pub degree: usize,
}

impl MoebiusExtremal {
    pub fn new(a: f64, dim: usize, degree: usize) -> Result<Self> {
        if !(0.0..1.0).contains(&a) {
            return Err(invalid("a", format!("{a} is outside [0, 1)")));
        }
        if dim == 0 {
            return Err(invalid("dim", "must be positive"));
        }
        Ok(Self { a, dim, degree })
    }

    pub fn scalar_coeffs(&self) -> Vec<Complex64> {
        mobius_scalar_coeffs(self.a, self.degree)
    }

    pub fn series(&self) -> MatrixSeries1D {
        MatrixSeries1D::from_scalar(&self.scalar_coeffs(), self.dim).expect("nonempty")
    }
}

fn mobius_scalar_coeffs(a: f64, degree: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(degree + 1);
    out.push(Complex64::new(a, 0.0));
    let mut pow = 1.0;
    for _ in 1..=degree {
        out.push(Complex64::new(-(1.0 - a * a) * pow, 0.0));
        pow *= a;
    }
    out
}

/// Truncated series of `psi_a` embedded in dimension `dim`.
pub fn mobius_series(a: f64, dim: usize, degree: usize) -> Result<MatrixSeries1D> {
    Ok(MoebiusExtremal::new(a, dim, degree)?.series())
}

/// Scalar series of `psi_a`.
pub fn mobius_scalar(a: f64, degree: usize) -> Result<ScalarSeries> {
    MoebiusExtremal::new(a, 1, degree)?;
    Ok(ScalarSeries(mobius_scalar_coeffs(a, degree)))
}

/// `M_r(psi_a) = (a + (1 - 2a^2) r) / (1 - a r)`.
pub fn mobius_majorant_closed(a: f64, r: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&a) {
        return Err(invalid("a", format!("{a} is outside [0, 1)")));
    }
    check_radius(r)?;
    Ok(pi_of(a, r))
}

#[inline]
fn pi_of(a: f64, r: f64) -> f64 {
    (a + (1.0 - 2.0 * a * a) * r) / (1.0 - a * r)
}

/// `(a_star, pi(a_star))` with `a_star = (2 - sqrt(2 (1 - r^2))) / (2r)`.
///
/// Defined for `1/3 <= r < 1`; at `r = 1/3` the maximizer is the boundary
/// point `a = 1`, where `pi = 1`.
pub fn bombieri_maximizer(r: f64) -> Result<(f64, f64)> {
    check_radius(r)?;
    if r < 1.0 / 3.0 - 1e-15 {
        return Err(invalid("r", format!("{r} is below 1/3")));
    }
    let a_star = ((2.0 - (2.0 * (1.0 - r * r)).sqrt()) / (2.0 * r)).min(1.0);
    Ok((a_star, pi_of(a_star, r)))
}

/// The lower bound as displayed in the literature, `(3 - sqrt(8 (1 - r^2))) / (1 - r)`.
///
/// Kept only so reports can show how it compares with `pi(a_star)`; it exceeds
/// `1/sqrt(1 - r^2)` for every `r > 1/3` and is never used as a bound.
pub fn printed_lower_bound(r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok((3.0 - (8.0 * (1.0 - r * r)).sqrt()) / (1.0 - r))
}

/// `h(xi) = xi ((1/sqrt 2 - xi) / (1 - xi / sqrt 2)) I`, truncated at `degree`.
pub fn zero_constant_extremal(dim: usize, degree: usize) -> Result<MatrixSeries1D> {
    zero_head_mobius(FRAC_1_SQRT_2, dim, degree)
}

/// `xi psi_a(xi) I` truncated at `degree` (so `A_0 = 0`).
pub fn zero_head_mobius(a: f64, dim: usize, degree: usize) -> Result<MatrixSeries1D> {
    if degree == 0 {
        return Err(invalid("degree", "zero-head extremal needs degree >= 1"));
    }
    let mut coeffs = vec![Complex64::new(0.0, 0.0)];
    coeffs.extend(mobius_scalar(a, degree - 1)?.0);
    if dim == 0 {
        return Err(invalid("dim", "must be positive"));
    }
    MatrixSeries1D::from_scalar(&coeffs, dim)
}

/// Closed-form majorant of `h`: `(r / sqrt 2) / (1 - r / sqrt 2)`.
pub fn zero_constant_majorant_closed(r: f64) -> Result<f64> {
    check_radius(r)?;
    let x = r * FRAC_1_SQRT_2;
    Ok(x / (1.0 - x))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::scalar_embed;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn psi_zero_is_minus_z() {
        let f = mobius_series(0.0, 2, 5).unwrap();
        assert!(f.coeff(0).unwrap().is_zero());
        assert_eq!(f.coeff(1).unwrap(), &scalar_embed(c(-1.0), 2));
        for k in 2..=5 {
            assert!(f.coeff(k).unwrap().is_zero());
        }
    }

    #[test]
    fn psi_half_coefficients() {
        let f = mobius_series(0.5, 3, 4).unwrap();
        assert_eq!(f.coeff(1).unwrap(), &scalar_embed(c(-0.75), 3));
        assert_eq!(f.coeff(2).unwrap(), &scalar_embed(c(-0.375), 3));
        assert_eq!(f.eval(c(0.0)).unwrap(), scalar_embed(c(0.5), 3));
    }

    #[test]
    fn a_out_of_range() {
        assert!(mobius_series(1.0, 1, 4).is_err());
        assert!(mobius_series(-0.1, 1, 4).is_err());
        assert!(mobius_majorant_closed(1.0, 0.2).is_err());
    }

    #[test]
    fn closed_majorant_at_a_zero_is_r() {
        for r in [0.0, 0.2, 0.7] {
            assert_eq!(mobius_majorant_closed(0.0, r).unwrap(), r);
        }
    }

    #[test]
    fn closed_majorant_exceeds_one_past_third() {
        let v = mobius_majorant_closed(0.999, 0.34).unwrap();
        assert!(v > 1.0 && (v - 1.00003).abs() < 1e-5, "{v}");
    }

    #[test]
    fn maximizer_reference_points() {
        let (a, v) = bombieri_maximizer(FRAC_1_SQRT_2).unwrap();
        assert!((a - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!((v - std::f64::consts::SQRT_2).abs() < 1e-14);
        let (_, v) = bombieri_maximizer(1.0 / 3.0).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        assert!(bombieri_maximizer(0.3).is_err());
    }

    #[test]
    fn printed_formula_at_inv_sqrt2() {
        let v = printed_lower_bound(FRAC_1_SQRT_2).unwrap();
        assert!((v - (2.0 + std::f64::consts::SQRT_2)).abs() < 1e-12);
    }

    #[test]
    fn zero_constant_extremal_coefficients() {
        let h = zero_constant_extremal(2, 10).unwrap();
        assert!(h.coeff(0).unwrap().is_zero());
        assert!((h.coeff_norms()[1] - FRAC_1_SQRT_2).abs() < 1e-15);
        for k in 2..=10 {
            let expected = 0.5 * FRAC_1_SQRT_2.powi(k as i32 - 2);
            assert!((h.coeff_norms()[k] - expected).abs() < 1e-15);
            assert!(h.coeff(k).unwrap().get(0, 0).re < 0.0);
        }
    }

    #[test]
    fn zero_constant_majorant_values() {
        assert!((zero_constant_majorant_closed(FRAC_1_SQRT_2).unwrap() - 1.0).abs() < 1e-15);
        let v = zero_constant_majorant_closed(0.72).unwrap();
        assert!((v - 1.0372).abs() < 1e-4 && v > 1.0);
        let h = zero_constant_extremal(1, 200).unwrap();
        assert!((h.majorant(FRAC_1_SQRT_2).unwrap() - 1.0).abs() < 1e-9);
    }
}
