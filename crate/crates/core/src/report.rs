//! Tabular reports behind the `bohr` subcommands.
//!
//! Each command returns a [`Report`]: `#`-prefixed metadata (tool version,
//! config, padding rule), a fixed column list, rows in deterministic order and
//! a summary. CSV and JSON renderings carry the same content.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::error::{invalid, BohrError, Result};
use crate::extremals::{
    mobius_majorant_closed, mobius_series, printed_lower_bound, zero_head_mobius,
};
use crate::inequality::{
    check_bohr, check_refined_g, check_refined_p, check_refined_quadratic, g_constraint_check,
    sharpness_sweep, Criterion, Family, GPolynomial,
};
use crate::multidim::{
    check_multidim, lift_via_linear, CircularDomain, DomainKind, MultiTheorem, ProbePlan,
};
use crate::radii::{
    bohr_radius_estimate, mchi_lower, mchi_upper, psi, solve_rnp, EstimateMode, RadiusQuery,
};
use crate::sampler::{
    coefficient_square_sum, diag_monomial_witness, sample_set, Sample, SampleManifest,
    SamplerConfig, RNG_ALGORITHM,
};
use crate::series::{MatrixSeries1D, DEFAULT_GRID};

pub const TOOL_VERSION: &str = concat!("bohr ", env!("CARGO_PKG_VERSION"));
pub const REPORT_SCHEMA_VERSION: u32 = 1;

/// Knobs shared by every sampling command.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub seed: u64,
    /// Matrix dimensions, cycled over sample indices.
    pub dims: Vec<usize>,
    pub degree: usize,
    pub samples: usize,
    /// Angular grid for pointwise terms (`||f(z)||` maxima).
    pub grid: usize,
    /// A margin counts as passing when it is `>= -tol`.
    pub tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            seed: 20_240_601,
            dims: vec![1, 2, 4],
            degree: 32,
            samples: 2000,
            grid: DEFAULT_GRID,
            tol: 1e-8,
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dims.is_empty() || self.dims.contains(&0) {
            return Err(invalid("dim", "dimensions must be positive"));
        }
        if self.samples == 0 {
            return Err(invalid("samples", "must be positive"));
        }
        if self.grid < 8 {
            return Err(invalid("grid", "must be at least 8"));
        }
        if !(self.tol > 0.0 && self.tol.is_finite()) {
            return Err(invalid("tol", "must be positive"));
        }
        self.sampler().validate()
    }

    pub fn sampler(&self) -> SamplerConfig {
        SamplerConfig::new(self.seed, self.dims[0], self.degree)
    }

    pub fn draw(&self) -> Result<Vec<Sample>> {
        self.validate()?;
        sample_set(&self.sampler(), self.samples, &self.dims)
    }

    fn describe(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}

/// One table cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
    Text(String),
    Bool(bool),
    Empty,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Int(v) => write!(f, "{v}"),
            Cell::Real(v) => f.write_str(&fmt_real(*v)),
            Cell::Text(s) => f.write_str(s),
            Cell::Bool(b) => write!(f, "{b}"),
            Cell::Empty => Ok(()),
        }
    }
}

/// Shortest round-trip form; exponent notation for tiny or huge magnitudes.
pub fn fmt_real(v: f64) -> String {
    let a = v.abs();
    if a != 0.0 && a.is_finite() && !(1e-4..1e15).contains(&a) {
        format!("{v:e}")
    } else {
        format!("{v}")
    }
}

impl Cell {
    fn to_json(&self) -> Value {
        match self {
            Cell::Int(v) => json!(v),
            Cell::Real(v) => json!(v),
            Cell::Text(s) => json!(s),
            Cell::Bool(b) => json!(b),
            Cell::Empty => Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as i64)
    }
}

impl From<bool> for Cell {
    fn from(v: bool) -> Self {
        Cell::Bool(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub command: &'static str,
    pub meta: Vec<(String, String)>,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
    pub summary: Vec<(&'static str, Cell)>,
    /// False when a mathematical check failed.
    pub pass: bool,
}

impl Report {
    fn new(command: &'static str, columns: Vec<&'static str>) -> Self {
        Self {
            command,
            meta: vec![
                ("tool".into(), TOOL_VERSION.into()),
                ("command".into(), command.into()),
            ],
            columns,
            rows: Vec::new(),
            summary: Vec::new(),
            pass: true,
        }
    }

    fn meta(&mut self, key: &str, value: impl Into<String>) {
        self.meta.push((key.to_string(), value.into()));
    }

    fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    fn sum(&mut self, key: &'static str, value: impl Into<Cell>) {
        self.summary.push((key, value.into()));
    }

    pub fn summary_value(&self, key: &str) -> Option<&Cell> {
        self.summary.iter().find(|(k, _)| *k == key).map(|(_, v)| v)
    }

    pub fn column(&self, name: &str) -> Option<Vec<&Cell>> {
        let idx = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|row| &row[idx]).collect())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Csv => self.to_csv(),
            Format::Json => self.to_json(),
        }
    }

    /// Metadata and summary as `# key: value` lines, then a header and rows.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            out.push_str(&format!("# {k}: {v}\n"));
        }
        for (k, v) in &self.summary {
            out.push_str(&format!("# summary.{k}: {v}\n"));
        }
        out.push_str(&format!("# pass: {}\n", self.pass));
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(&self.columns).expect("in-memory write");
        for row in &self.rows {
            w.write_record(row.iter().map(|c| c.to_string()))
                .expect("in-memory write");
        }
        let body = w.into_inner().expect("in-memory flush");
        out.push_str(std::str::from_utf8(&body).expect("utf-8 cells"));
        out
    }

    pub fn to_json(&self) -> String {
        let meta: Map<String, Value> = self
            .meta
            .iter()
            .map(|(k, v)| (k.clone(), json!(v)))
            .collect();
        let summary: Map<String, Value> = self
            .summary
            .iter()
            .map(|(k, v)| (k.to_string(), v.to_json()))
            .collect();
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|row| Value::Array(row.iter().map(Cell::to_json).collect()))
            .collect();
        let doc = json!({
            "schema_version": REPORT_SCHEMA_VERSION,
            "command": self.command,
            "meta": meta,
            "columns": self.columns,
            "rows": rows,
            "summary": summary,
            "pass": self.pass,
        });
        let mut s = serde_json::to_string_pretty(&doc).expect("report serializes");
        s.push('\n');
        s
    }
}

// ---------------------------------------------------------------- radius

/// `R_{N,p}` over `n_values x p_values`, with residuals and monotonicity.
pub fn radius_table(n_values: &[u32], p_values: &[f64], tol: f64) -> Result<Report> {
    if n_values.is_empty() || p_values.is_empty() {
        return Err(invalid("range", "empty N or p range"));
    }
    let mut report = Report::new("radius", vec!["n", "p", "radius", "residual"]);
    report.meta("equation", "2 (1 + r) r^N - p (1 - r)^2 = 0");
    report.meta("tol", fmt_real(tol));
    let mut grid = Vec::with_capacity(n_values.len());
    for &n in n_values {
        let mut row_vals = Vec::with_capacity(p_values.len());
        for &p in p_values {
            let q = RadiusQuery::with_tol(n, p, tol)?;
            let r = solve_rnp(q);
            let residual = psi(n, p, r).abs();
            report.push(vec![n.into(), p.into(), r.into(), residual.into()]);
            row_vals.push((r, residual));
        }
        grid.push(row_vals);
    }
    let worst = grid
        .iter()
        .flatten()
        .map(|&(_, res)| res)
        .fold(0.0, f64::max);
    let strict = |xs: &[f64]| xs.windows(2).all(|w| w[0] < w[1]);
    let n_sorted = n_values.windows(2).all(|w| w[0] < w[1]);
    let p_sorted = p_values.windows(2).all(|w| w[0] < w[1]);
    // R_{N,p} increases with N and with p.
    let monotone_n = !n_sorted
        || (0..p_values.len()).all(|j| {
            let col: Vec<f64> = grid.iter().map(|row| row[j].0).collect();
            strict(&col)
        });
    let monotone_p = !p_sorted
        || grid.iter().all(|row| {
            let rs: Vec<f64> = row.iter().map(|x| x.0).collect();
            strict(&rs)
        });
    report.sum("rows", report.rows.len());
    report.sum("max_residual", worst);
    report.sum("monotone_in_n", monotone_n);
    report.sum("monotone_in_p", monotone_p);
    report.pass = worst <= tol && monotone_n && monotone_p;
    Ok(report)
}

// ---------------------------------------------------------------- verify

/// Statement checked by `verify`.
#[derive(Debug, Clone, PartialEq)]
pub enum VerifyTheorem {
    Bohr,
    RefinedP {
        n: usize,
        p: f64,
    },
    RefinedQuadratic,
    RefinedG(GPolynomial),
    SchwarzPick,
    Growth,
    Multi {
        theorem: MultiTheorem,
        domain: DomainKind,
        nvars: usize,
    },
}

impl VerifyTheorem {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Bohr => "bohr",
            Self::RefinedP { .. } => "refined-p",
            Self::RefinedQuadratic => "refined-quadratic",
            Self::RefinedG(_) => "refined-g",
            Self::SchwarzPick => "schwarz-pick",
            Self::Growth => "growth",
            Self::Multi { theorem, .. } => theorem.name(),
        }
    }

    /// Radius (or `theta`) used when none is given.
    pub fn default_radius(&self) -> Option<f64> {
        match self {
            Self::Bohr | Self::RefinedQuadratic | Self::RefinedG(_) => Some(1.0 / 3.0),
            Self::RefinedP { n, p } => Some(solve_rnp(RadiusQuery::new(*n as u32, *p).ok()?)),
            Self::SchwarzPick => None,
            Self::Growth => Some(0.5),
            Self::Multi { theorem, .. } => Some(theorem.radius()),
        }
    }

    /// Parameter checks that must pass before any sampling.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::RefinedP { n, p } => {
                RadiusQuery::new(*n as u32, *p)?;
            }
            Self::RefinedG(g) => {
                let c = g_constraint_check(g);
                if c < 0.0 {
                    return Err(BohrError::InadmissibleG(c));
                }
            }
            Self::Multi {
                theorem,
                nvars,
                domain,
                ..
            } => {
                CircularDomain::new(*domain, *nvars)?;
                match theorem {
                    MultiTheorem::T23 { n, p } => {
                        RadiusQuery::new(*n as u32, *p)?;
                    }
                    MultiTheorem::T25(g) => {
                        let c = g_constraint_check(g);
                        if c < 0.0 {
                            return Err(BohrError::InadmissibleG(c));
                        }
                    }
                    _ => {}
                }
            }
            _ => {}
        }
        Ok(())
    }
}

/// Random direction of dual norm one for the lifted samples.
fn lift_direction(seed: u64, index: usize, domain: &CircularDomain) -> Vec<Complex64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6c69_6674_6469_7273);
    rng.set_stream(index as u64);
    loop {
        let v: Vec<Complex64> = (0..domain.nvars)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        let dual = domain.dual_norm(&v);
        if dual > 1e-6 {
            return v.iter().map(|x| x / dual).collect();
        }
    }
}

/// Random probes per lifted sample, on top of the extremal direction.
pub const DEFAULT_PROBES: usize = 8;

struct Row {
    margin: f64,
    pad: f64,
}

fn verify_one(
    cfg: &RunConfig,
    theorem: &VerifyTheorem,
    r: f64,
    probes: usize,
    sample: &Sample,
) -> Result<Row> {
    let f = &sample.series;
    let v = |v: crate::inequality::InequalityVerdict| Row {
        margin: v.margin,
        pad: v.truncation_pad,
    };
    Ok(match theorem {
        VerifyTheorem::Bohr => v(check_bohr(f, r)?),
        VerifyTheorem::RefinedP { n, p } => v(check_refined_p(f, r, *n, *p, cfg.grid)?),
        VerifyTheorem::RefinedQuadratic => v(check_refined_quadratic(f, r)?),
        VerifyTheorem::RefinedG(g) => v(check_refined_g(f, r, g)?),
        VerifyTheorem::SchwarzPick => Row {
            margin: f.schwarz_pick_margin()?,
            pad: 0.0,
        },
        VerifyTheorem::Growth => Row {
            margin: f.growth_bound_margin(r, cfg.grid)?,
            pad: 0.0,
        },
        VerifyTheorem::Multi {
            theorem,
            domain,
            nvars,
        } => {
            let domain = CircularDomain::new(*domain, *nvars)?;
            let a = lift_direction(cfg.seed, sample.index, &domain);
            let h = match theorem {
                MultiTheorem::T22 => f.shift_up(),
                _ => f.clone(),
            };
            let lifted = lift_via_linear(&h, &a, &domain)?;
            let plan = ProbePlan {
                random: probes,
                seed: cfg
                    .seed
                    .wrapping_mul(0x9e37_79b9)
                    .wrapping_add(sample.index as u64),
                directions: vec![domain.extremal_point(&a, 1.0)?],
            };
            let verdict = check_multidim(&lifted, &domain, theorem, r, &plan)?;
            Row {
                margin: verdict.margin,
                pad: verdict.truncation_pad,
            }
        }
    })
}

/// Runs `theorem` over a fresh sample set; one row per sample.
pub fn verify(
    cfg: &RunConfig,
    theorem: &VerifyTheorem,
    r: Option<f64>,
    probes: usize,
) -> Result<Report> {
    theorem.validate()?;
    cfg.validate()?;
    let r = r.or_else(|| theorem.default_radius()).unwrap_or(0.0);
    if theorem.default_radius().is_some() && !(0.0..1.0).contains(&r) {
        return Err(BohrError::RadiusOutOfRange(r));
    }
    let samples = cfg.draw()?;
    let rows: Vec<Row> = samples
        .par_iter()
        .map(|s| verify_one(cfg, theorem, r, probes, s))
        .collect::<Result<_>>()?;

    let mut report = Report::new(
        "verify",
        vec![
            "index",
            "kind",
            "dim",
            "degree",
            "r",
            "margin",
            "truncation_pad",
            "pass",
        ],
    );
    report.meta("config", cfg.describe());
    report.meta("rng", RNG_ALGORITHM);
    report.meta("theorem", theorem.name());
    if let VerifyTheorem::Multi { domain, nvars, .. } = theorem {
        report.meta(
            "domain",
            format!(
                "{} n={nvars} probes={probes}+extremal",
                domain_name(*domain)
            ),
        );
    }
    report.meta(
        "padding",
        "majorant tails padded by (1-|a0|^2) r^(D+1)/(1-r); squared and area tails by the matching geometric bounds; exact series (polynomials) get no padding",
    );
    let mut failures = 0usize;
    let mut worst = (f64::INFINITY, 0usize);
    let mut max_pad = 0.0f64;
    for (s, row) in samples.iter().zip(&rows) {
        let ok = row.margin >= -cfg.tol;
        failures += usize::from(!ok);
        if row.margin < worst.0 {
            worst = (row.margin, s.index);
        }
        max_pad = max_pad.max(row.pad);
        let r_cell = if theorem.default_radius().is_some() {
            Cell::Real(r)
        } else {
            Cell::Empty
        };
        report.push(vec![
            s.index.into(),
            s.kind.name().into(),
            s.series.dim().into(),
            s.series.degree().into(),
            r_cell,
            row.margin.into(),
            row.pad.into(),
            ok.into(),
        ]);
    }
    report.sum("samples", samples.len());
    report.sum("failures", failures);
    report.sum("worst_margin", worst.0);
    report.sum("worst_index", worst.1);
    report.sum("max_truncation_pad", max_pad);
    report.pass = failures == 0;
    Ok(report)
}

fn domain_name(kind: DomainKind) -> &'static str {
    match kind {
        DomainKind::Polydisk => "polydisk",
        DomainKind::EuclideanBall => "ball",
    }
}

// ---------------------------------------------------------------- sharpness

/// Proven radius around which the sign flip is demonstrated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadiusId {
    OneThird,
    InvSqrt2,
    Rnp { n: u32, p: f64 },
}

impl RadiusId {
    pub fn value(self) -> Result<f64> {
        Ok(match self {
            Self::OneThird => 1.0 / 3.0,
            Self::InvSqrt2 => FRAC_1_SQRT_2,
            Self::Rnp { n, p } => solve_rnp(RadiusQuery::new(n, p)?),
        })
    }

    pub fn name(self) -> String {
        match self {
            Self::OneThird => "one-third".into(),
            Self::InvSqrt2 => "inv-sqrt2".into(),
            Self::Rnp { n, p } => format!("rnp({n},{p})"),
        }
    }
}

/// Sign-flip table for an extremal family across a proven radius.
pub fn sharpness(family: Family, radius_id: RadiusId, grid: usize) -> Result<Report> {
    let radius = radius_id.value()?;
    let (criterion, a_list, r_list): (Criterion, Vec<f64>, Vec<f64>) = match (family, radius_id) {
        (Family::Mobius, RadiusId::OneThird) => (
            Criterion::Bohr,
            vec![0.999, 0.9999],
            vec![0.32, 0.33, 0.34, 0.35],
        ),
        (Family::Mobius, RadiusId::Rnp { n, p }) => (
            Criterion::RefinedP {
                n: n as usize,
                p,
                grid,
            },
            vec![0.999, 0.9999],
            vec![radius - 0.02, radius - 0.01, radius + 0.01, radius + 0.02],
        ),
        (Family::ZeroConstant, RadiusId::InvSqrt2) => (
            Criterion::ZeroHead,
            vec![0.5, FRAC_1_SQRT_2, 0.9],
            vec![0.69, 0.70, 0.72, 0.73],
        ),
        _ => {
            return Err(invalid(
                "radius",
                format!(
                    "no sharpness criterion pairs this family with {}",
                    radius_id.name()
                ),
            ))
        }
    };
    let table = sharpness_sweep(family, &criterion, radius, &a_list, &r_list)?;
    let mut report = Report::new(
        "sharpness",
        vec!["a", "r", "beyond_radius", "margin", "pass"],
    );
    report.meta(
        "family",
        match family {
            Family::Mobius => "mobius",
            Family::ZeroConstant => "zero-constant",
        },
    );
    report.meta("radius_id", radius_id.name());
    report.meta("degree", crate::series::DEFAULT_DEGREE.to_string());
    report.meta("padding", "truncation padding included in every margin");
    for row in &table.rows {
        report.push(vec![
            row.a.into(),
            row.r.into(),
            row.beyond_radius.into(),
            row.margin.into(),
            row.pass.into(),
        ]);
    }
    report.sum("radius", radius);
    report.sum("inside_all_pass", table.inside_all_pass());
    report.sum("outside_each_fails", table.outside_each_fails());
    report.pass = table.sign_flip();
    Ok(report)
}

// ---------------------------------------------------------------- mchi

/// Default `r` grid for the growth-function table.
pub fn default_mchi_grid() -> Vec<f64> {
    let mut rs: Vec<f64> = (0..10).map(|i| i as f64 / 10.0).collect();
    rs.push(1.0 / 3.0);
    rs.push(FRAC_1_SQRT_2);
    rs.sort_by(f64::total_cmp);
    rs
}

/// Bounds on `m(chi, r)` next to the empirical sample supremum.
pub fn mchi_table(cfg: &RunConfig, r_grid: &[f64]) -> Result<Report> {
    let samples = cfg.draw()?;
    let mut report = Report::new(
        "mchi",
        vec![
            "r",
            "upper",
            "lower",
            "printed",
            "printed_exceeds_upper",
            "empirical_sup",
            "empirical_exceeds_upper",
            "r_times_upper",
            "r_times_lower",
        ],
    );
    report.meta("config", cfg.describe());
    report.meta("rng", RNG_ALGORITHM);
    report.meta("lower", "pi(a*) for r >= 1/3, 1 below");
    report.meta(
        "printed",
        "(3 - sqrt(8 (1 - r^2))) / (1 - r), shown for comparison only",
    );
    report.meta(
        "padding",
        "none: empirical_sup is the plain sample majorant",
    );
    let mut printed_flags = 0usize;
    for &r in r_grid {
        let upper = mchi_upper(r)?;
        let lower = mchi_lower(r)?;
        let printed = printed_lower_bound(r)?;
        let sup = samples
            .par_iter()
            .map(|s| s.series.majorant(r).expect("r checked"))
            .reduce(|| 0.0, f64::max);
        let flag = printed > upper + 1e-12;
        printed_flags += usize::from(flag);
        report.push(vec![
            r.into(),
            upper.into(),
            lower.into(),
            printed.into(),
            flag.into(),
            sup.into(),
            (sup > upper).into(),
            (r * upper).into(),
            (r * lower).into(),
        ]);
    }
    report.sum("rows", r_grid.len());
    report.sum("printed_inconsistent_rows", printed_flags);
    Ok(report)
}

// ---------------------------------------------------------------- witness

/// Diagonal monomial witnesses and a sample search for `M_r > 1/sqrt(1-r^2)`.
///
/// Nothing here is asserted: rows record what was observed.
pub fn witness(cfg: &RunConfig, r_grid: &[f64], max_dim: usize) -> Result<Report> {
    let mut report = Report::new(
        "witness",
        vec![
            "source",
            "r",
            "square_sum",
            "square_sum_exceeds_one",
            "majorant",
            "upper",
            "majorant_exceeds_upper",
        ],
    );
    report.meta("config", cfg.describe());
    report.meta("rng", RNG_ALGORITHM);
    report.meta(
        "note",
        "sum ||A_k||^2 <= ||f||^2 holds for scalar functions but not for matrix coefficients; rows are logged, not asserted",
    );
    let mut witness_hits = 0usize;
    for d in 2..=max_dim.max(2) {
        let f = diag_monomial_witness(d);
        let sq = coefficient_square_sum(&f);
        for &r in r_grid {
            let m = f.majorant(r)?;
            let upper = mchi_upper(r)?;
            witness_hits += usize::from(m > upper);
            report.push(vec![
                format!("diag-monomial-{d}").into(),
                r.into(),
                sq.into(),
                (sq > 1.0).into(),
                m.into(),
                upper.into(),
                (m > upper).into(),
            ]);
        }
    }
    let samples = cfg.draw()?;
    let mut sample_hits = 0usize;
    for &r in r_grid {
        let upper = mchi_upper(r)?;
        let (best_m, best_sq, hits) = samples
            .par_iter()
            .map(|s| {
                let m = s.series.majorant(r).expect("r checked");
                (m, coefficient_square_sum(&s.series), usize::from(m > upper))
            })
            .reduce(
                || (0.0, 0.0, 0),
                |x, y| (x.0.max(y.0), x.1.max(y.1), x.2 + y.2),
            );
        sample_hits += hits;
        report.push(vec![
            format!("samples-{}", samples.len()).into(),
            r.into(),
            best_sq.into(),
            (best_sq > 1.0).into(),
            best_m.into(),
            upper.into(),
            (best_m > upper).into(),
        ]);
    }
    let diag2 = coefficient_square_sum(&diag_monomial_witness(2));
    report.sum("diag2_square_sum", diag2);
    report.sum("square_sum_step_flagged", diag2 > 1.0);
    report.sum("witness_rows_above_upper", witness_hits);
    report.sum("sample_hits_above_upper", sample_hits);
    Ok(report)
}

// ---------------------------------------------------------------- estimate

/// Empirical radius from samples, optionally joined by the extremal family.
pub fn estimate(cfg: &RunConfig, mode: EstimateMode, with_extremals: bool) -> Result<Report> {
    let samples = cfg.draw()?;
    let mut set: Vec<MatrixSeries1D> = match mode {
        EstimateMode::Plain => samples.into_iter().map(|s| s.series).collect(),
        EstimateMode::ZeroHead => samples.into_iter().map(|s| s.series.shift_up()).collect(),
    };
    if with_extremals {
        for i in 0..100 {
            let a = i as f64 / 100.0;
            set.push(match mode {
                EstimateMode::Plain => mobius_series(a, 1, cfg.degree)?,
                EstimateMode::ZeroHead => zero_head_mobius(a, 1, cfg.degree.max(1))?,
            });
        }
        if mode == EstimateMode::Plain {
            for a in [0.999, 0.9999] {
                set.push(mobius_series(a, 1, cfg.degree)?);
            }
        }
    }
    let est = bohr_radius_estimate(&set, mode)?;
    let mut report = Report::new(
        "estimate",
        vec!["mode", "radius", "sup_margin", "samples", "truncation"],
    );
    report.meta("config", cfg.describe());
    report.meta("rng", RNG_ALGORITHM);
    report.meta("extremals", with_extremals.to_string());
    report.meta(
        "padding",
        "none: the estimate is an upper bound of the true radius",
    );
    report.push(vec![
        match mode {
            EstimateMode::Plain => "plain",
            EstimateMode::ZeroHead => "zero-head",
        }
        .into(),
        est.radius.into(),
        est.sup_margin.into(),
        est.samples.into(),
        est.truncation.into(),
    ]);
    report.sum("radius", est.radius);
    if mode == EstimateMode::Plain {
        report.sum("closed_form_check", mobius_majorant_closed(0.5, 1.0 / 3.0)?);
    }
    Ok(report)
}

// ---------------------------------------------------------------- sample

/// Replayable manifest of the configured sample set.
pub fn sample_manifest(cfg: &RunConfig) -> Result<SampleManifest> {
    let samples = cfg.draw()?;
    Ok(SampleManifest::from_samples(
        &cfg.sampler(),
        &cfg.dims,
        &samples,
    ))
}

/// One row per sample: coefficient-norm statistics and certified sup bound.
pub fn sample_summary(cfg: &RunConfig) -> Result<Report> {
    let samples = cfg.draw()?;
    let sampler = cfg.sampler();
    let bounds: Vec<f64> = samples
        .par_iter()
        .map(|s| crate::sampler::certified_sup_bound(&s.series, sampler.grid))
        .collect::<Result<_>>()?;
    let mut report = Report::new(
        "sample",
        vec![
            "index",
            "kind",
            "dim",
            "degree",
            "head_norm",
            "majorant_one_third",
            "certified_sup",
        ],
    );
    report.meta("config", cfg.describe());
    report.meta("rng", RNG_ALGORITHM);
    report.meta("certification_grid", sampler.grid.to_string());
    for (s, b) in samples.iter().zip(bounds) {
        report.push(vec![
            s.index.into(),
            s.kind.name().into(),
            s.series.dim().into(),
            s.series.degree().into(),
            s.series.coeff_norms()[0].into(),
            s.series.majorant(1.0 / 3.0)?.into(),
            b.into(),
        ]);
    }
    report.sum("samples", samples.len());
    Ok(report)
}
