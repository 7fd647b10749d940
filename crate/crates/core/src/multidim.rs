//! Multivariable matrix-coefficient power series on complete circular domains.
//!
//! A [`MultiSeries`] stores its terms grouped by total degree, so the
//! homogeneous parts `P_k(z) = sum_{|alpha| = k} A_alpha z^alpha` are direct
//! sums over one group. Slicing along a direction `a` turns `F` into the
//! one-variable series `t -> sum_k P_k(a) t^k`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, BohrError, Result};
use crate::inequality::{g_constraint_check, GPolynomial};
use crate::linalg::{operator_norm, ComplexMatrix};
use crate::sampler::{matrix_from_record, matrix_to_record, MatrixRecord};
use crate::series::{
    area_tail_pad, majorant_tail_pad, square_tail_pad, MatrixSeries1D, SCALAR_HEAD_TOL,
};

pub const MAX_VARS: usize = 6;
/// Upper bound on `C(n + D, n)`, the size of the multi-index table.
pub const MAX_TERMS: usize = 100_000;
/// Probes sit just inside the homothetic domain.
pub const PROBE_SHRINK: f64 = 1.0 - 1e-6;

/// Exponent vector; ordered by total degree, then lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(pub Vec<u32>);

impl MultiIndex {
    pub fn degree(&self) -> usize {
        self.0.iter().map(|&e| e as usize).sum()
    }

    pub fn nvars(&self) -> usize {
        self.0.len()
    }

    /// `|alpha|! / alpha!`.
    pub fn multinomial(&self) -> f64 {
        let mut remaining = self.degree() as u64;
        let mut out = 1.0;
        for &e in &self.0 {
            out *= binomial(remaining, e as u64);
            remaining -= e as u64;
        }
        out
    }

    pub fn monomial(&self, z: &[Complex64]) -> Complex64 {
        self.0
            .iter()
            .zip(z)
            .fold(Complex64::new(1.0, 0.0), |acc, (&e, &zj)| acc * zj.powu(e))
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

fn binomial(n: u64, k: u64) -> f64 {
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// All multi-indices with `|alpha| = k` in `n` variables, in ascending order.
pub fn indices_of_degree(n: usize, k: usize) -> Vec<MultiIndex> {
    fn rec(n: usize, k: usize, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if n == 1 {
            prefix.push(k as u32);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for e in 0..=k {
            prefix.push(e as u32);
            rec(n - 1, k - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, k, &mut Vec::with_capacity(n), &mut out);
    }
    out
}

/// `C(n + D, n)`.
pub fn table_size(nvars: usize, degree: usize) -> f64 {
    binomial((nvars + degree) as u64, nvars as u64)
}

/// `f(z) = sum_alpha A_alpha z^alpha` with `|alpha| <= D`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiSeries {
    nvars: usize,
    dim: usize,
    degree: usize,
    /// `parts[k]` holds the terms with `|alpha| = k`, sorted.
    parts: Vec<Vec<(MultiIndex, ComplexMatrix)>>,
    /// No discarded tail beyond degree `D`.
    exact: bool,
}

impl MultiSeries {
    /// Builds a series from terms; repeated indices are summed.
    pub fn new(nvars: usize, dim: usize, terms: Vec<(MultiIndex, ComplexMatrix)>) -> Result<Self> {
        if nvars == 0 || nvars > MAX_VARS {
            return Err(invalid(
                "nvars",
                format!("{nvars} is outside 1..={MAX_VARS}"),
            ));
        }
        if dim == 0 {
            return Err(BohrError::EmptyDimension);
        }
        let mut map: BTreeMap<MultiIndex, ComplexMatrix> = BTreeMap::new();
        for (alpha, m) in terms {
            if alpha.nvars() != nvars {
                return Err(BohrError::DimensionMismatch {
                    expected: nvars,
                    found: alpha.nvars(),
                });
            }
            if m.dim() != dim {
                return Err(BohrError::DimensionMismatch {
                    expected: dim,
                    found: m.dim(),
                });
            }
            match map.get_mut(&alpha) {
                Some(acc) => *acc = acc.add(&m)?,
                None => {
                    map.insert(alpha, m);
                }
            }
        }
        let degree = map.keys().map(MultiIndex::degree).max().unwrap_or(0);
        if table_size(nvars, degree) > MAX_TERMS as f64 {
            return Err(BohrError::TooManyTerms {
                vars: nvars,
                degree,
            });
        }
        let mut parts = vec![Vec::new(); degree + 1];
        for (alpha, m) in map {
            parts[alpha.degree()].push((alpha, m));
        }
        Ok(Self {
            nvars,
            dim,
            degree,
            parts,
            exact: false,
        })
    }

    /// Marks the series as a polynomial with no discarded tail.
    pub fn exact(mut self) -> Self {
        self.exact = true;
        self
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> impl Iterator<Item = &(MultiIndex, ComplexMatrix)> {
        self.parts.iter().flatten()
    }

    /// `f(0) = P_0`.
    pub fn constant(&self) -> ComplexMatrix {
        self.parts[0]
            .first()
            .map(|(_, m)| m.clone())
            .unwrap_or_else(|| ComplexMatrix::zeros(self.dim))
    }

    fn check_point(&self, z: &[Complex64]) -> Result<()> {
        if z.len() != self.nvars {
            return Err(BohrError::DimensionMismatch {
                expected: self.nvars,
                found: z.len(),
            });
        }
        Ok(())
    }

    /// `P_k(z)`; the zero matrix for `k > D`.
    pub fn homogeneous_part(&self, k: usize, z: &[Complex64]) -> Result<ComplexMatrix> {
        self.check_point(z)?;
        let mut acc = ComplexMatrix::zeros(self.dim);
        if let Some(part) = self.parts.get(k) {
            let powers = power_table(z, k);
            for (alpha, m) in part {
                acc.add_scaled_assign(m, monomial_from_table(&powers, alpha));
            }
        }
        Ok(acc)
    }

    /// `P_0(z), ..., P_D(z)`.
    pub fn homogeneous_parts(&self, z: &[Complex64]) -> Result<Vec<ComplexMatrix>> {
        self.check_point(z)?;
        let powers = power_table(z, self.degree);
        Ok(self
            .parts
            .iter()
            .map(|part| {
                let mut acc = ComplexMatrix::zeros(self.dim);
                for (alpha, m) in part {
                    acc.add_scaled_assign(m, monomial_from_table(&powers, alpha));
                }
                acc
            })
            .collect())
    }

    /// `sum_k ||P_k(z)||`.
    pub fn homogeneous_majorant(&self, z: &[Complex64]) -> Result<f64> {
        Ok(self.homogeneous_parts(z)?.iter().map(operator_norm).sum())
    }

    pub fn eval(&self, z: &[Complex64]) -> Result<ComplexMatrix> {
        let parts = self.homogeneous_parts(z)?;
        let mut acc = ComplexMatrix::zeros(self.dim);
        for p in &parts {
            acc.add_scaled_assign(p, Complex64::new(1.0, 0.0));
        }
        Ok(acc)
    }

    /// One-variable series `t -> f(a t)` with coefficients `P_k(a)`.
    pub fn slice(&self, a: &[Complex64]) -> Result<MatrixSeries1D> {
        self.check_point(a)?;
        if a.iter().all(|x| x.norm() == 0.0) {
            return Err(BohrError::ZeroDirection);
        }
        let s = MatrixSeries1D::new(self.homogeneous_parts(a)?)?;
        Ok(if self.exact { s.exact() } else { s })
    }

    /// Certified bound on `sup ||f||` over the closed unit polydisk, from a
    /// `grid^n` torus grid and the Bernstein inequality in each variable.
    pub fn polydisk_sup_bound(&self, grid: usize) -> Result<f64> {
        let mut factor = 1.0;
        for j in 0..self.nvars {
            let dj = self
                .terms()
                .map(|(alpha, _)| alpha.0[j] as usize)
                .max()
                .unwrap_or(0);
            if grid as f64 <= PI * dj as f64 {
                return Err(BohrError::GridTooCoarse { grid, degree: dj });
            }
            factor /= 1.0 - PI * dj as f64 / grid as f64;
        }
        let total = grid
            .checked_pow(self.nvars as u32)
            .filter(|&t| t <= 1 << 22)
            .ok_or_else(|| invalid("grid", "torus grid exceeds 2^22 points"))?;
        let max = (0..total)
            .into_par_iter()
            .map(|mut idx| {
                let mut z = Vec::with_capacity(self.nvars);
                for _ in 0..self.nvars {
                    z.push(Complex64::from_polar(
                        1.0,
                        2.0 * PI * (idx % grid) as f64 / grid as f64,
                    ));
                    idx /= grid;
                }
                operator_norm(&self.eval(&z).expect("point has nvars coordinates"))
            })
            .reduce(|| 0.0, f64::max);
        Ok(max * factor)
    }
}

fn power_table(z: &[Complex64], max_exp: usize) -> Vec<Vec<Complex64>> {
    z.iter()
        .map(|&zj| {
            let mut row = Vec::with_capacity(max_exp + 1);
            let mut p = Complex64::new(1.0, 0.0);
            for _ in 0..=max_exp {
                row.push(p);
                p *= zj;
            }
            row
        })
        .collect()
}

fn monomial_from_table(powers: &[Vec<Complex64>], alpha: &MultiIndex) -> Complex64 {
    alpha
        .0
        .iter()
        .zip(powers)
        .fold(Complex64::new(1.0, 0.0), |acc, (&e, row)| {
            acc * row[e as usize]
        })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DomainKind {
    Polydisk,
    EuclideanBall,
}

/// Complete circular domain described by its gauge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CircularDomain {
    pub kind: DomainKind,
    pub nvars: usize,
}

impl CircularDomain {
    pub fn new(kind: DomainKind, nvars: usize) -> Result<Self> {
        if nvars == 0 || nvars > MAX_VARS {
            return Err(invalid(
                "nvars",
                format!("{nvars} is outside 1..={MAX_VARS}"),
            ));
        }
        Ok(Self { kind, nvars })
    }

    pub fn polydisk(nvars: usize) -> Result<Self> {
        Self::new(DomainKind::Polydisk, nvars)
    }

    pub fn ball(nvars: usize) -> Result<Self> {
        Self::new(DomainKind::EuclideanBall, nvars)
    }

    /// `max |z_j|` (polydisk) or `(sum |z_j|^2)^{1/2}` (ball).
    pub fn gauge(&self, z: &[Complex64]) -> f64 {
        match self.kind {
            DomainKind::Polydisk => z.iter().map(|x| x.norm()).fold(0.0, f64::max),
            DomainKind::EuclideanBall => z.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt(),
        }
    }

    /// `z` lies in the homothetic domain `theta Q`.
    pub fn contains_scaled(&self, z: &[Complex64], theta: f64) -> bool {
        self.gauge(z) < theta
    }

    /// Dual norm of the linear form `l_a(z) = sum a_j z_j`, i.e. `sup_Q |l_a|`.
    pub fn dual_norm(&self, a: &[Complex64]) -> f64 {
        match self.kind {
            DomainKind::Polydisk => a.iter().map(|x| x.norm()).sum(),
            DomainKind::EuclideanBall => a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt(),
        }
    }

    /// Point of gauge `theta` with `l_a(z) = -theta * dual_norm(a)`.
    pub fn extremal_point(&self, a: &[Complex64], theta: f64) -> Result<Vec<Complex64>> {
        let dual = self.dual_norm(a);
        if dual == 0.0 {
            return Err(BohrError::ZeroDirection);
        }
        Ok(match self.kind {
            DomainKind::Polydisk => a
                .iter()
                .map(|x| {
                    if x.norm() == 0.0 {
                        Complex64::new(-theta, 0.0)
                    } else {
                        -theta * x.conj() / x.norm()
                    }
                })
                .collect(),
            DomainKind::EuclideanBall => a.iter().map(|x| -theta * x.conj() / dual).collect(),
        })
    }

    /// Rescales a nonzero point onto the gauge sphere of radius `theta`.
    pub fn project(&self, z: &[Complex64], theta: f64) -> Result<Vec<Complex64>> {
        let g = self.gauge(z);
        if g == 0.0 {
            return Err(BohrError::ZeroDirection);
        }
        Ok(z.iter().map(|x| x * (theta / g)).collect())
    }

    fn random_probe(&self, rng: &mut ChaCha8Rng, theta: f64) -> Vec<Complex64> {
        match self.kind {
            DomainKind::Polydisk => (0..self.nvars)
                .map(|_| Complex64::from_polar(theta, 2.0 * PI * rng.random::<f64>()))
                .collect(),
            DomainKind::EuclideanBall => {
                let v: Vec<Complex64> = (0..self.nvars)
                    .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                    .collect();
                self.project(&v, theta).unwrap_or_else(|_| {
                    let mut e = vec![Complex64::new(0.0, 0.0); self.nvars];
                    e[0] = Complex64::new(theta, 0.0);
                    e
                })
            }
        }
    }
}

/// `h(l_a(z))` with `l_a(z) = sum a_j z_j`, expanded with the multinomial theorem.
pub fn lift_via_linear(
    h: &MatrixSeries1D,
    a: &[Complex64],
    domain: &CircularDomain,
) -> Result<MultiSeries> {
    if a.len() != domain.nvars {
        return Err(BohrError::DimensionMismatch {
            expected: domain.nvars,
            found: a.len(),
        });
    }
    let dual = domain.dual_norm(a);
    if dual > 1.0 + 1e-12 {
        return Err(BohrError::IllNormalized(dual));
    }
    if dual == 0.0 {
        return Err(BohrError::ZeroDirection);
    }
    let n = domain.nvars;
    if table_size(n, h.degree()) > MAX_TERMS as f64 {
        return Err(BohrError::TooManyTerms {
            vars: n,
            degree: h.degree(),
        });
    }
    let mut terms = Vec::new();
    for (k, hk) in h.coeffs().iter().enumerate() {
        if hk.is_zero() {
            continue;
        }
        for alpha in indices_of_degree(n, k) {
            let weight = alpha.monomial(a) * alpha.multinomial();
            if weight != Complex64::new(0.0, 0.0) {
                terms.push((alpha, hk.scale(weight)));
            }
        }
    }
    if terms.is_empty() {
        terms.push((MultiIndex(vec![0; n]), ComplexMatrix::zeros(h.dim())));
    }
    let lifted = MultiSeries::new(n, h.dim(), terms)?;
    Ok(if h.is_exact() { lifted.exact() } else { lifted })
}

/// Theorem whose left-hand side is checked on the homothetic domain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum MultiTheorem {
    /// `sum_k ||P_k(z)|| <= 1`, radius 1/3.
    T21,
    /// `sum_{k >= 1} ||P_k(z)|| <= 1` for `f(0) = 0`, radius `1/sqrt 2`.
    T22,
    /// `||f(z)||^p + sum_{k >= N} ||P_k(z)|| <= 1`, radius `R_{N,p}`.
    T23 { n: usize, p: f64 },
    /// Quadratic refinement, radius 1/3.
    T24,
    /// `sum_k ||P_k(z)|| + G(sum_k k ||P_k(z)||^2) <= 1`, radius 1/3.
    T25(GPolynomial),
}

impl MultiTheorem {
    pub fn name(&self) -> &'static str {
        match self {
            Self::T21 => "t21",
            Self::T22 => "t22",
            Self::T23 { .. } => "t23",
            Self::T24 => "t24",
            Self::T25(_) => "t25",
        }
    }

    /// Proven radius of the homothetic domain.
    pub fn radius(&self) -> f64 {
        match self {
            Self::T21 | Self::T24 | Self::T25(_) => 1.0 / 3.0,
            Self::T22 => std::f64::consts::FRAC_1_SQRT_2,
            Self::T23 { n, p } => crate::radii::solve_rnp(
                crate::radii::RadiusQuery::new(*n as u32, *p).expect("validated parameters"),
            ),
        }
    }
}

/// Where to evaluate the left-hand side.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ProbePlan {
    pub random: usize,
    pub seed: u64,
    /// Explicit probe directions, rescaled onto the gauge sphere.
    pub directions: Vec<Vec<Complex64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MultiVerdict {
    pub theorem: &'static str,
    pub theta: f64,
    /// Worst `1 - LHS - pad` over all probes.
    pub margin: f64,
    pub witness: Vec<Complex64>,
    pub truncation_pad: f64,
    pub probes: usize,
}

impl MultiVerdict {
    pub fn pass(&self) -> bool {
        self.margin >= 0.0
    }
}

/// Worst margin of `theorem` over the probes of `plan`, each placed at gauge
/// `theta * (1 - 1e-6)`.
pub fn check_multidim(
    f: &MultiSeries,
    domain: &CircularDomain,
    theorem: &MultiTheorem,
    theta: f64,
    plan: &ProbePlan,
) -> Result<MultiVerdict> {
    if f.nvars() != domain.nvars {
        return Err(BohrError::DimensionMismatch {
            expected: domain.nvars,
            found: f.nvars(),
        });
    }
    if !(theta > 0.0 && theta < 1.0) {
        return Err(BohrError::RadiusOutOfRange(theta));
    }
    let head = f.constant();
    let b = match theorem {
        MultiTheorem::T22 => {
            let h = operator_norm(&head);
            if h > SCALAR_HEAD_TOL {
                return Err(BohrError::NonZeroHead(h));
            }
            0.0
        }
        _ => {
            let a0 = head.trace() / f.dim() as f64;
            if head.distance_to_scalar(a0) > SCALAR_HEAD_TOL {
                return Err(BohrError::NonScalarHead);
            }
            if a0.norm() >= 1.0 {
                return Err(BohrError::HeadNotContractive(a0.norm()));
            }
            a0.norm()
        }
    };
    match theorem {
        MultiTheorem::T23 { n, p } => {
            if *n == 0 {
                return Err(BohrError::ZeroTailIndex);
            }
            if !(*p > 0.0 && *p <= 1.0) {
                return Err(invalid("p", format!("{p} is outside (0, 1]")));
            }
        }
        MultiTheorem::T25(g) => {
            let c = g_constraint_check(g);
            if c < 0.0 {
                return Err(BohrError::InadmissibleG(c));
            }
        }
        _ => {}
    }

    let rho = theta * PROBE_SHRINK;
    let mut points = Vec::with_capacity(plan.random + plan.directions.len());
    for dir in &plan.directions {
        if dir.len() != domain.nvars {
            return Err(BohrError::DimensionMismatch {
                expected: domain.nvars,
                found: dir.len(),
            });
        }
        points.push(domain.project(dir, rho)?);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(plan.seed);
    for _ in 0..plan.random {
        points.push(domain.random_probe(&mut rng, rho));
    }
    if points.is_empty() {
        return Err(invalid("probes", "at least one probe required"));
    }

    let evaluated: Vec<(f64, f64)> = points
        .par_iter()
        .map(|z| probe_margin(f, domain, theorem, b, z))
        .collect::<Result<_>>()?;
    let (worst_idx, &(margin, pad)) = evaluated
        .iter()
        .enumerate()
        .min_by(|x, y| x.1 .0.total_cmp(&y.1 .0).then(x.0.cmp(&y.0)))
        .expect("nonempty");
    Ok(MultiVerdict {
        theorem: theorem.name(),
        theta,
        margin,
        witness: points[worst_idx].clone(),
        truncation_pad: pad,
        probes: points.len(),
    })
}

/// `(margin, pad)` at a single point.
fn probe_margin(
    f: &MultiSeries,
    domain: &CircularDomain,
    theorem: &MultiTheorem,
    b: f64,
    z: &[Complex64],
) -> Result<(f64, f64)> {
    let g = domain.gauge(z);
    let parts = f.homogeneous_parts(z)?;
    let norms: Vec<f64> = parts.iter().map(operator_norm).collect();
    let deg = f.degree();
    let bound = 1.0 - b * b;
    let pad_or_zero = |pad: f64| if f.is_exact() { 0.0 } else { pad };
    let trunc = pad_or_zero(majorant_tail_pad(bound, g, deg));
    let majorant: f64 = norms.iter().sum();
    let (lhs, pad) = match theorem {
        MultiTheorem::T21 => (majorant, trunc),
        MultiTheorem::T22 => (majorant, pad_or_zero(majorant_tail_pad(1.0, g, deg))),
        MultiTheorem::T23 { n, p } => {
            let value = operator_norm(&f.eval(z)?);
            let tail: f64 = norms.iter().skip(*n).sum();
            let lhs = value.powf(*p) + tail;
            let padded = (value + trunc).powf(*p) + tail + trunc;
            (lhs, padded - lhs)
        }
        MultiTheorem::T24 => {
            let weight = 1.0 / (1.0 + b) + g / (1.0 - g);
            let squares: f64 = norms.iter().skip(1).map(|n| n * n).sum();
            (
                majorant + weight * squares,
                trunc + weight * pad_or_zero(square_tail_pad(bound, g, deg)),
            )
        }
        MultiTheorem::T25(gp) => {
            let s: f64 = norms
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, n)| k as f64 * n * n)
                .sum();
            let s_pad = pad_or_zero(area_tail_pad(bound, g, deg));
            (
                majorant + gp.eval(s),
                trunc + gp.eval(s + s_pad) - gp.eval(s),
            )
        }
    };
    Ok((1.0 - lhs - pad, pad))
}

pub const MULTI_MANIFEST_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TermRecord {
    pub alpha: Vec<u32>,
    pub matrix: MatrixRecord,
}

/// JSON form of a [`MultiSeries`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiManifest {
    pub schema_version: u32,
    pub nvars: usize,
    pub dim: usize,
    #[serde(default)]
    pub exact: bool,
    pub terms: Vec<TermRecord>,
}

impl MultiManifest {
    pub fn from_series(f: &MultiSeries) -> Self {
        Self {
            schema_version: MULTI_MANIFEST_SCHEMA_VERSION,
            nvars: f.nvars(),
            dim: f.dim(),
            exact: f.is_exact(),
            terms: f
                .terms()
                .map(|(alpha, m)| TermRecord {
                    alpha: alpha.0.clone(),
                    matrix: matrix_to_record(m),
                })
                .collect(),
        }
    }

    pub fn to_series(&self) -> Result<MultiSeries> {
        if self.schema_version != MULTI_MANIFEST_SCHEMA_VERSION {
            return Err(BohrError::Manifest(format!(
                "unsupported schema version {}",
                self.schema_version
            )));
        }
        let terms = self
            .terms
            .iter()
            .map(|t| {
                Ok((
                    MultiIndex(t.alpha.clone()),
                    matrix_from_record(self.dim, &t.matrix)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let f = MultiSeries::new(self.nvars, self.dim, terms)?;
        Ok(if self.exact { f.exact() } else { f })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| BohrError::Manifest(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extremals::mobius_series;
    use crate::linalg::scalar_embed;
    use crate::series::ScalarSeries;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn index_enumeration_counts() {
        assert_eq!(indices_of_degree(3, 2).len(), 6);
        assert_eq!(indices_of_degree(1, 5), vec![MultiIndex(vec![5])]);
        let all: usize = (0..=4).map(|k| indices_of_degree(3, k).len()).sum();
        assert_eq!(all as f64, table_size(3, 4));
        let v = indices_of_degree(2, 3);
        assert!(v.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn multinomial_values() {
        assert_eq!(MultiIndex(vec![1, 1]).multinomial(), 2.0);
        assert_eq!(MultiIndex(vec![2, 1, 1]).multinomial(), 12.0);
        assert_eq!(MultiIndex(vec![0, 0]).multinomial(), 1.0);
    }

    #[test]
    fn single_monomial_part() {
        let a = scalar_embed(c(2.0, 1.0), 2);
        let f = MultiSeries::new(2, 2, vec![(MultiIndex(vec![1, 1]), a.clone())]).unwrap();
        let z = [c(0.5, 0.0), c(0.5, 0.0)];
        assert_eq!(f.homogeneous_part(2, &z).unwrap(), a.scale(c(0.25, 0.0)));
        assert!(f.homogeneous_part(1, &z).unwrap().is_zero());
        assert!(f.homogeneous_part(7, &z).unwrap().is_zero());
        assert!(f.homogeneous_part(0, &z).unwrap().is_zero());
    }

    #[test]
    fn zero_part_is_constant() {
        let a0 = scalar_embed(c(0.3, 0.0), 2);
        let f = MultiSeries::new(
            2,
            2,
            vec![
                (MultiIndex(vec![0, 0]), a0.clone()),
                (MultiIndex(vec![2, 0]), ComplexMatrix::identity(2)),
            ],
        )
        .unwrap();
        assert_eq!(
            f.homogeneous_part(0, &[c(0.4, 0.1), c(-0.2, 0.0)]).unwrap(),
            a0
        );
        assert!((f.homogeneous_majorant(&[c(0.0, 0.0), c(0.0, 0.0)]).unwrap() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn duplicate_terms_merge() {
        let i = ComplexMatrix::identity(1);
        let f = MultiSeries::new(
            1,
            1,
            vec![(MultiIndex(vec![1]), i.clone()), (MultiIndex(vec![1]), i)],
        )
        .unwrap();
        assert_eq!(f.terms().count(), 1);
        assert_eq!(f.eval(&[c(0.5, 0.0)]).unwrap().get(0, 0), c(1.0, 0.0));
    }

    #[test]
    fn rejects_oversized_tables_and_bad_shapes() {
        let i = ComplexMatrix::identity(1);
        assert!(matches!(
            MultiSeries::new(6, 1, vec![(MultiIndex(vec![30, 0, 0, 0, 0, 0]), i.clone())]),
            Err(BohrError::TooManyTerms { .. })
        ));
        assert!(MultiSeries::new(7, 1, vec![]).is_err());
        assert!(MultiSeries::new(2, 1, vec![(MultiIndex(vec![1]), i)]).is_err());
    }

    #[test]
    fn slice_of_first_coordinate() {
        let a = scalar_embed(c(0.0, 1.0), 2);
        let f = MultiSeries::new(3, 2, vec![(MultiIndex(vec![1, 0, 0]), a.clone())]).unwrap();
        let s = f.slice(&[c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_eq!(s.degree(), 1);
        assert!(s.coeff(0).unwrap().is_zero());
        assert_eq!(s.coeff(1).unwrap(), &a);
        assert_eq!(f.slice(&[c(0.0, 0.0); 3]), Err(BohrError::ZeroDirection));
    }

    #[test]
    fn gauges() {
        let pd = CircularDomain::polydisk(2).unwrap();
        let ball = CircularDomain::ball(2).unwrap();
        let z = [c(0.3, 0.4), c(0.0, -0.2)];
        assert!((pd.gauge(&z) - 0.5).abs() < 1e-15);
        assert!((ball.gauge(&z) - (0.25f64 + 0.04).sqrt()).abs() < 1e-15);
        assert!(pd.contains_scaled(&z, 0.51) && !pd.contains_scaled(&z, 0.5));
    }

    #[test]
    fn lift_identity_along_axis() {
        let h = ScalarSeries::from_real(&[0.0, 1.0]).embed(2);
        let pd = CircularDomain::polydisk(2).unwrap();
        let f = lift_via_linear(&h, &[c(1.0, 0.0), c(0.0, 0.0)], &pd).unwrap();
        let terms: Vec<_> = f.terms().collect();
        assert_eq!(terms.len(), 1);
        assert_eq!(terms[0].0, MultiIndex(vec![1, 0]));
        assert_eq!(terms[0].1, ComplexMatrix::identity(2));
    }

    #[test]
    fn lift_rejects_bad_normalization() {
        let h = mobius_series(0.5, 1, 4).unwrap();
        let pd = CircularDomain::polydisk(2).unwrap();
        let ball = CircularDomain::ball(2).unwrap();
        let a = [c(0.6, 0.0), c(0.6, 0.0)];
        assert!(matches!(
            lift_via_linear(&h, &a, &pd),
            Err(BohrError::IllNormalized(_))
        ));
        // The same form is admissible on the ball (|a|_2 < 1).
        assert!(lift_via_linear(&h, &a, &ball).is_ok());
    }

    #[test]
    fn lift_agrees_with_composition() {
        let h = mobius_series(0.7, 2, 12).unwrap();
        let a = [c(0.5, 0.0), c(0.0, 0.5)];
        let pd = CircularDomain::polydisk(2).unwrap();
        let f = lift_via_linear(&h, &a, &pd).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let z = pd.random_probe(&mut rng, 0.9);
            let l: Complex64 = a.iter().zip(&z).map(|(x, y)| x * y).sum();
            let diff = f.eval(&z).unwrap().sub(&h.eval(l).unwrap()).unwrap();
            assert!(diff.max_abs_entry() < 1e-13);
        }
    }

    #[test]
    fn torus_bound_dominates_grid_values() {
        let h = mobius_series(0.7, 1, 8).unwrap();
        let pd = CircularDomain::polydisk(2).unwrap();
        let f = lift_via_linear(&h, &[c(0.5, 0.0), c(0.5, 0.0)], &pd).unwrap();
        let bound = f.polydisk_sup_bound(128).unwrap();
        let corner = operator_norm(&f.eval(&[c(-1.0, 0.0), c(-1.0, 0.0)]).unwrap());
        assert!(corner <= bound && bound < 2.0, "{corner} {bound}");
        assert!(matches!(
            f.polydisk_sup_bound(16),
            Err(BohrError::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn extremal_points_hit_the_dual_norm() {
        let a = [c(0.3, 0.4), c(0.0, -0.5)];
        for dom in [
            CircularDomain::polydisk(2).unwrap(),
            CircularDomain::ball(2).unwrap(),
        ] {
            let z = dom.extremal_point(&a, 0.4).unwrap();
            assert!((dom.gauge(&z) - 0.4).abs() < 1e-15);
            let l: Complex64 = a.iter().zip(&z).map(|(x, y)| x * y).sum();
            assert!((l + 0.4 * dom.dual_norm(&a)).norm() < 1e-15);
        }
    }

    #[test]
    fn hypothesis_errors() {
        let pd = CircularDomain::polydisk(1).unwrap();
        let f = MultiSeries::new(
            1,
            1,
            vec![(MultiIndex(vec![0]), scalar_embed(c(0.5, 0.0), 1))],
        )
        .unwrap()
        .exact();
        let plan = ProbePlan {
            random: 4,
            seed: 1,
            directions: vec![],
        };
        assert!(matches!(
            check_multidim(&f, &pd, &MultiTheorem::T22, 0.5, &plan),
            Err(BohrError::NonZeroHead(_))
        ));
        assert!(matches!(
            check_multidim(
                &f,
                &pd,
                &MultiTheorem::T25(GPolynomial::new(vec![0.9]).unwrap()),
                0.3,
                &plan
            ),
            Err(BohrError::InadmissibleG(_))
        ));
        assert!(check_multidim(&f, &pd, &MultiTheorem::T21, 0.3, &ProbePlan::default()).is_err());
        let v = check_multidim(&f, &pd, &MultiTheorem::T21, 0.3, &plan).unwrap();
        assert!((v.margin - 0.5).abs() < 1e-15);
    }

    #[test]
    fn manifest_round_trip() {
        let h = mobius_series(0.4, 2, 5).unwrap();
        let ball = CircularDomain::ball(3).unwrap();
        let f = lift_via_linear(&h, &[c(0.5, 0.0), c(0.0, 0.5), c(0.5, 0.0)], &ball).unwrap();
        let m = MultiManifest::from_series(&f);
        let back = MultiManifest::from_json(&m.to_json())
            .unwrap()
            .to_series()
            .unwrap();
        assert_eq!(back, f);
    }
}
