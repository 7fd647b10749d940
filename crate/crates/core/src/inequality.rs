//! Left-hand-side evaluators and verdicts for the Bohr-type inequalities.
//!
//! Each check returns an [`InequalityVerdict`] whose margin is `1 - LHS`
//! after subtracting certified padding for the truncated tail (and, for
//! pointwise terms maximized over a circle grid, for the grid spacing).

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_radius, invalid, BohrError, Result};
use crate::extremals::{mobius_series, zero_head_mobius};
use crate::series::{MatrixSeries1D, DEFAULT_DEGREE};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InequalityKind {
    Bohr,
    RefinedP,
    RefinedQuadratic,
    RefinedG,
    ZeroHead,
}

impl InequalityKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Bohr => "bohr",
            Self::RefinedP => "refined_p",
            Self::RefinedQuadratic => "refined_quadratic",
            Self::RefinedG => "refined_g",
            Self::ZeroHead => "zero_head",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InequalityVerdict {
    pub kind: InequalityKind,
    pub r: f64,
    /// `1 - LHS - padding`.
    pub margin: f64,
    pub witness_z: Complex64,
    /// Total padding already subtracted from the margin.
    pub truncation_pad: f64,
}

impl InequalityVerdict {
    pub fn pass(&self) -> bool {
        self.margin >= 0.0
    }

    pub fn lhs(&self) -> f64 {
        1.0 - self.margin - self.truncation_pad
    }
}

/// `G(w) = c_1 w + ... + c_l w^l` with positive coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GPolynomial {
    coeffs: Vec<f64>,
}

impl GPolynomial {
    pub fn new(coeffs: Vec<f64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(invalid("G", "at least one coefficient required"));
        }
        if let Some(c) = coeffs.iter().find(|c| !(**c > 0.0) || !c.is_finite()) {
            return Err(invalid(
                "G",
                format!("coefficient {c} is not a positive real"),
            ));
        }
        Ok(Self { coeffs })
    }

    /// `G(w) = (8/9) w`.
    pub fn eight_ninths() -> Self {
        Self {
            coeffs: vec![8.0 / 9.0],
        }
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn eval(&self, w: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| (acc + c) * w)
    }
}

/// `1 - sum_m 8 (2m - 1) c_m (3/8)^{2m}`; nonnegative iff `G` is admissible.
pub fn g_constraint_check(g: &GPolynomial) -> f64 {
    let x = (3.0f64 / 8.0).powi(2);
    let mut pow = 1.0;
    let mut total = 0.0;
    for (i, &c) in g.coeffs.iter().enumerate() {
        let m = (i + 1) as f64;
        pow *= x;
        total += 8.0 * (2.0 * m - 1.0) * c * pow;
    }
    1.0 - total
}

/// Hypotheses shared by the one-variable checks: scalar contractive head and
/// `0 <= r < 1`. Returns `|a_0|`.
fn hypotheses(f: &MatrixSeries1D, r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(f.require_scalar_head()?.norm())
}

/// Certified majorant-tail padding from the bound `||A_k|| <= 1 - |a_0|^2`.
pub fn truncation_pad(f: &MatrixSeries1D, r: f64) -> f64 {
    let b = f.coeff_norms()[0];
    f.majorant_pad(1.0 - b * b, r)
}

/// `sum ||A_k|| r^k <= 1`.
pub fn check_bohr(f: &MatrixSeries1D, r: f64) -> Result<InequalityVerdict> {
    hypotheses(f, r)?;
    let pad = truncation_pad(f, r);
    let lhs = f.majorant(r)?;
    Ok(InequalityVerdict {
        kind: InequalityKind::Bohr,
        r,
        margin: 1.0 - lhs - pad,
        witness_z: Complex64::new(r, 0.0),
        truncation_pad: pad,
    })
}

/// `||f(z)||^p + sum_{k >= N} ||A_k|| r^k <= 1` on `|z| = r`.
///
/// The sup of `||f(z)||` is taken over `grid` circle points and padded by the
/// Lipschitz bound `(pi / grid) * sum_k k ||A_k|| r^k` between neighbours.
pub fn check_refined_p(
    f: &MatrixSeries1D,
    r: f64,
    n: usize,
    p: f64,
    grid: usize,
) -> Result<InequalityVerdict> {
    hypotheses(f, r)?;
    if n == 0 {
        return Err(BohrError::ZeroTailIndex);
    }
    if !(p > 0.0 && p <= 1.0) {
        return Err(invalid("p", format!("{p} is outside (0, 1]")));
    }
    if grid < 8 {
        return Err(invalid("grid", "at least 8 points required"));
    }
    let trunc = truncation_pad(f, r);
    let grid_pad = PI / grid as f64 * f.derivative_majorant(r)?;
    let (max_norm, witness) = f.circle_max(r, grid);
    let tail = f.tail_majorant(r, n)?;
    let lhs = max_norm.powf(p) + tail;
    let padded = (max_norm + grid_pad + trunc).powf(p) + tail + trunc;
    let pad = padded - lhs;
    Ok(InequalityVerdict {
        kind: InequalityKind::RefinedP,
        r,
        margin: 1.0 - padded,
        witness_z: witness,
        truncation_pad: pad,
    })
}

/// `M_r(f) + (1/(1 + ||f(0)||) + r/(1 - r)) sum_{k >= 1} ||A_k||^2 r^{2k} <= 1`.
pub fn check_refined_quadratic(f: &MatrixSeries1D, r: f64) -> Result<InequalityVerdict> {
    let b = hypotheses(f, r)?;
    let weight = 1.0 / (1.0 + b) + r / (1.0 - r);
    let lhs = f.majorant(r)? + weight * f.square_sum(r)?;
    let pad = truncation_pad(f, r) + weight * f.square_pad(1.0 - b * b, r);
    Ok(InequalityVerdict {
        kind: InequalityKind::RefinedQuadratic,
        r,
        margin: 1.0 - lhs - pad,
        witness_z: Complex64::new(r, 0.0),
        truncation_pad: pad,
    })
}

/// `M_r(f) + G(S) <= 1` with `S = sum k ||A_k||^2 r^{2k}`.
pub fn check_refined_g(f: &MatrixSeries1D, r: f64, g: &GPolynomial) -> Result<InequalityVerdict> {
    let constraint = g_constraint_check(g);
    if constraint < 0.0 {
        return Err(BohrError::InadmissibleG(constraint));
    }
    let b = hypotheses(f, r)?;
    let s = f.area_functional(r)?;
    let s_pad = f.area_pad(1.0 - b * b, r);
    let lhs = f.majorant(r)? + g.eval(s);
    let pad = truncation_pad(f, r) + (g.eval(s + s_pad) - g.eval(s));
    Ok(InequalityVerdict {
        kind: InequalityKind::RefinedG,
        r,
        margin: 1.0 - lhs - pad,
        witness_z: Complex64::new(r, 0.0),
        truncation_pad: pad,
    })
}

/// `sum_{k >= 1} ||A_k|| r^k <= 1` for `A_0 = 0`, padded with `||A_k|| <= 1`.
pub fn check_zero_head(f: &MatrixSeries1D, r: f64) -> Result<InequalityVerdict> {
    check_radius(r)?;
    let head = f.coeff_norms()[0];
    if head > 1e-12 {
        return Err(BohrError::NonZeroHead(head));
    }
    let pad = f.majorant_pad(1.0, r);
    let lhs = f.majorant(r)?;
    Ok(InequalityVerdict {
        kind: InequalityKind::ZeroHead,
        r,
        margin: 1.0 - lhs - pad,
        witness_z: Complex64::new(r, 0.0),
        truncation_pad: pad,
    })
}

/// Inequality under test in a sharpness sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Criterion {
    Bohr,
    RefinedP { n: usize, p: f64, grid: usize },
    Quadratic,
    RefinedG(GPolynomial),
    ZeroHead,
}

impl Criterion {
    pub fn check(&self, f: &MatrixSeries1D, r: f64) -> Result<InequalityVerdict> {
        match self {
            Self::Bohr => check_bohr(f, r),
            Self::RefinedP { n, p, grid } => check_refined_p(f, r, *n, *p, *grid),
            Self::Quadratic => check_refined_quadratic(f, r),
            Self::RefinedG(g) => check_refined_g(f, r, g),
            Self::ZeroHead => check_zero_head(f, r),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    /// `psi_a`.
    Mobius,
    /// `xi psi_a(xi)`; `a = 1/sqrt 2` is the extremal `h`.
    ZeroConstant,
}

impl Family {
    pub fn member(self, a: f64, degree: usize) -> Result<MatrixSeries1D> {
        match self {
            Self::Mobius => mobius_series(a, 1, degree),
            Self::ZeroConstant => zero_head_mobius(a, 1, degree),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SharpnessRow {
    pub a: f64,
    pub r: f64,
    pub beyond_radius: bool,
    pub margin: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessTable {
    pub radius: f64,
    pub rows: Vec<SharpnessRow>,
}

impl SharpnessTable {
    /// Every row at `r <= radius` passes.
    pub fn inside_all_pass(&self) -> bool {
        self.rows
            .iter()
            .filter(|row| !row.beyond_radius)
            .all(|row| row.pass)
    }

    /// Every probed `r > radius` has at least one failing member.
    pub fn outside_each_fails(&self) -> bool {
        let mut rs: Vec<f64> = self
            .rows
            .iter()
            .filter(|row| row.beyond_radius)
            .map(|row| row.r)
            .collect();
        rs.dedup();
        rs.iter().all(|&r| {
            self.rows
                .iter()
                .any(|row| row.r == r && row.beyond_radius && !row.pass)
        })
    }

    pub fn sign_flip(&self) -> bool {
        self.inside_all_pass() && self.outside_each_fails()
    }
}

/// Margin table over `a_list x r_list` for one extremal family.
pub fn sharpness_sweep(
    family: Family,
    criterion: &Criterion,
    radius: f64,
    a_list: &[f64],
    r_list: &[f64],
) -> Result<SharpnessTable> {
    let mut rows = Vec::with_capacity(a_list.len() * r_list.len());
    for &a in a_list {
        let f = family.member(a, DEFAULT_DEGREE)?;
        for &r in r_list {
            let v = criterion.check(&f, r)?;
            rows.push(SharpnessRow {
                a,
                r,
                beyond_radius: r > radius,
                margin: v.margin,
                pass: v.pass(),
            });
        }
    }
    Ok(SharpnessTable { radius, rows })
}
