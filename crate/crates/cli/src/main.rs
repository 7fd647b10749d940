//! `bohr`: radius tables, verification sweeps, sharpness tables and reports.
//!
//! Exit status: 0 when every check passed, 1 when a mathematical check
//! failed, 2 on a usage error.

use std::path::PathBuf;
use std::process::ExitCode;

use bohr_core::inequality::{Family, GPolynomial};
use bohr_core::multidim::{DomainKind, MultiTheorem};
use bohr_core::radii::EstimateMode;
use bohr_core::report::{self, Format, RadiusId, Report, RunConfig, VerifyTheorem};
use bohr_core::BohrError;
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "bohr",
    version,
    about = "Operator-valued Bohr inequality laboratory"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Common {
    /// Base seed of the sampler.
    #[arg(long, default_value_t = RunConfig::default().seed)]
    seed: u64,
    /// Matrix dimensions, cycled over samples (comma separated).
    #[arg(long, value_delimiter = ',', default_value = "1,2,4")]
    dim: Vec<usize>,
    /// Truncation degree of sampled series.
    #[arg(long, default_value_t = 32)]
    degree: usize,
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    /// Angular grid for pointwise maxima.
    #[arg(long, default_value_t = 256)]
    grid: usize,
    /// Pass threshold: margins >= -tol count as passing.
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[command(flatten)]
    output: Output,
}

#[derive(Args, Debug, Clone)]
struct Output {
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
    /// Write to PATH instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq)]
enum TheoremArg {
    Bohr,
    RefinedP,
    RefinedQuadratic,
    RefinedG,
    SchwarzPick,
    Growth,
    T21,
    T22,
    T23,
    T24,
    T25,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum DomainArg {
    Polydisk,
    Ball,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum FamilyArg {
    Mobius,
    ZeroConstant,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum RadiusArg {
    OneThird,
    InvSqrt2,
    Rnp,
}

#[derive(ValueEnum, Debug, Clone, Copy)]
enum ModeArg {
    Plain,
    ZeroHead,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Table of R_{N,p} with residuals.
    Radius {
        /// N values: a range `a-b` or a comma list.
        #[arg(long, default_value = "1-8")]
        n: String,
        #[arg(
            long,
            value_delimiter = ',',
            default_value = "0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,0.9,1.0"
        )]
        p: Vec<f64>,
        /// Residual tolerance of the solver.
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[command(flatten)]
        output: Output,
    },
    /// Check one inequality over a fresh sample set.
    Verify {
        #[arg(value_enum)]
        theorem: TheoremArg,
        /// Radius (or homothety factor theta); defaults to the proven value.
        #[arg(long)]
        r: Option<f64>,
        #[arg(long = "tail-index", default_value_t = 1)]
        tail_index: usize,
        #[arg(long = "power", default_value_t = 1.0)]
        power: f64,
        /// Coefficients c_1, c_2, ... of G(w) = sum c_m w^m.
        #[arg(long, value_delimiter = ',')]
        g: Option<Vec<f64>>,
        #[arg(long, value_enum, default_value_t = DomainArg::Polydisk)]
        domain: DomainArg,
        #[arg(long, default_value_t = 2)]
        nvars: usize,
        /// Random probes per lifted sample.
        #[arg(long, default_value_t = report::DEFAULT_PROBES)]
        probes: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Sign-flip table of an extremal family across a proven radius.
    Sharpness {
        #[arg(long, value_enum, default_value_t = FamilyArg::Mobius)]
        family: FamilyArg,
        #[arg(long, value_enum, default_value_t = RadiusArg::OneThird)]
        radius: RadiusArg,
        #[arg(long = "tail-index", default_value_t = 1)]
        tail_index: u32,
        #[arg(long = "power", default_value_t = 1.0)]
        power: f64,
        #[arg(long, default_value_t = 256)]
        grid: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Upper, lower, printed and empirical values of the growth function.
    Mchi {
        #[arg(long, value_delimiter = ',')]
        r: Option<Vec<f64>>,
        #[command(flatten)]
        common: Common,
    },
    /// Diagonal-monomial witnesses and the sample search above 1/sqrt(1-r^2).
    Witness {
        #[arg(long, value_delimiter = ',', default_value = "0.3,0.5,0.7,0.9")]
        r: Vec<f64>,
        #[arg(long = "max-dim", default_value_t = 4)]
        max_dim: usize,
        #[command(flatten)]
        common: Common,
    },
    /// Empirical Bohr radius of the sample set.
    Estimate {
        #[arg(long, value_enum, default_value_t = ModeArg::Plain)]
        mode: ModeArg,
        /// Add the extremal family to the sample set.
        #[arg(long)]
        extremals: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Sample set as a replayable JSON manifest (or a CSV summary).
    Sample {
        #[command(flatten)]
        common: Common,
    },
}

impl Common {
    fn config(&self) -> RunConfig {
        RunConfig {
            seed: self.seed,
            dims: self.dim.clone(),
            degree: self.degree,
            samples: self.samples,
            grid: self.grid,
            tol: self.tol,
        }
    }
}

impl Output {
    fn format(&self) -> Format {
        match self.format {
            FormatArg::Csv => Format::Csv,
            FormatArg::Json => Format::Json,
        }
    }
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(std::io::Error),
}

impl From<BohrError> for Failure {
    fn from(e: BohrError) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn parse_n_values(text: &str) -> Result<Vec<u32>, Failure> {
    let bad = || Failure::Usage(format!("invalid N range `{text}`"));
    if let Some((a, b)) = text.split_once('-') {
        let a: u32 = a.trim().parse().map_err(|_| bad())?;
        let b: u32 = b.trim().parse().map_err(|_| bad())?;
        if a == 0 || a > b {
            return Err(bad());
        }
        Ok((a..=b).collect())
    } else {
        text.split(',')
            .map(|s| s.trim().parse::<u32>().map_err(|_| bad()))
            .collect()
    }
}

fn theorem_from_args(
    theorem: TheoremArg,
    tail_index: usize,
    power: f64,
    g: Option<Vec<f64>>,
    domain: DomainArg,
    nvars: usize,
) -> Result<VerifyTheorem, Failure> {
    let g = match g {
        Some(c) => GPolynomial::new(c)?,
        None => GPolynomial::eight_ninths(),
    };
    let domain = match domain {
        DomainArg::Polydisk => DomainKind::Polydisk,
        DomainArg::Ball => DomainKind::EuclideanBall,
    };
    let multi = |theorem| VerifyTheorem::Multi {
        theorem,
        domain,
        nvars,
    };
    Ok(match theorem {
        TheoremArg::Bohr => VerifyTheorem::Bohr,
        TheoremArg::RefinedP => VerifyTheorem::RefinedP {
            n: tail_index,
            p: power,
        },
        TheoremArg::RefinedQuadratic => VerifyTheorem::RefinedQuadratic,
        TheoremArg::RefinedG => VerifyTheorem::RefinedG(g),
        TheoremArg::SchwarzPick => VerifyTheorem::SchwarzPick,
        TheoremArg::Growth => VerifyTheorem::Growth,
        TheoremArg::T21 => multi(MultiTheorem::T21),
        TheoremArg::T22 => multi(MultiTheorem::T22),
        TheoremArg::T23 => multi(MultiTheorem::T23 {
            n: tail_index,
            p: power,
        }),
        TheoremArg::T24 => multi(MultiTheorem::T24),
        TheoremArg::T25 => multi(MultiTheorem::T25(g)),
    })
}

fn emit(text: &str, out: &Option<PathBuf>) -> Result<(), Failure> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(Failure::Io),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_report(report: &Report, output: &Output) -> Result<bool, Failure> {
    emit(&report.render(output.format()), &output.out)?;
    Ok(report.pass)
}

fn run(cli: Cli) -> Result<bool, Failure> {
    match cli.command {
        Command::Radius { n, p, tol, output } => {
            let ns = parse_n_values(&n)?;
            emit_report(&report::radius_table(&ns, &p, tol)?, &output)
        }
        Command::Verify {
            theorem,
            r,
            tail_index,
            power,
            g,
            domain,
            nvars,
            probes,
            common,
        } => {
            let th = theorem_from_args(theorem, tail_index, power, g, domain, nvars)?;
            let rep = report::verify(&common.config(), &th, r, probes)?;
            emit_report(&rep, &common.output)
        }
        Command::Sharpness {
            family,
            radius,
            tail_index,
            power,
            grid,
            output,
        } => {
            let family = match family {
                FamilyArg::Mobius => Family::Mobius,
                FamilyArg::ZeroConstant => Family::ZeroConstant,
            };
            let radius = match radius {
                RadiusArg::OneThird => RadiusId::OneThird,
                RadiusArg::InvSqrt2 => RadiusId::InvSqrt2,
                RadiusArg::Rnp => RadiusId::Rnp {
                    n: tail_index,
                    p: power,
                },
            };
            emit_report(&report::sharpness(family, radius, grid)?, &output)
        }
        Command::Mchi { r, common } => {
            let grid = r.unwrap_or_else(report::default_mchi_grid);
            emit_report(
                &report::mchi_table(&common.config(), &grid)?,
                &common.output,
            )
        }
        Command::Witness { r, max_dim, common } => emit_report(
            &report::witness(&common.config(), &r, max_dim)?,
            &common.output,
        ),
        Command::Estimate {
            mode,
            extremals,
            common,
        } => {
            let mode = match mode {
                ModeArg::Plain => EstimateMode::Plain,
                ModeArg::ZeroHead => EstimateMode::ZeroHead,
            };
            emit_report(
                &report::estimate(&common.config(), mode, extremals)?,
                &common.output,
            )
        }
        Command::Sample { common } => {
            let cfg = common.config();
            match common.output.format() {
                Format::Json => {
                    let mut text = report::sample_manifest(&cfg)?.to_json();
                    text.push('\n');
                    emit(&text, &common.output.out)?;
                    Ok(true)
                }
                Format::Csv => emit_report(&report::sample_summary(&cfg)?, &common.output),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Io(e)) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
