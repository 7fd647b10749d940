use thiserror::Error;

/// Errors raised by the laboratory's evaluators and generators.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BohrError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix dimension must be at least 1")]
    EmptyDimension,

    #[error("point |z| = {modulus} lies outside the closed unit disk")]
    OutsideDisk { modulus: f64 },

    #[error("radius {0} is outside [0, 1)")]
    RadiusOutOfRange(f64),

    #[error("tail index N must be at least 1")]
    ZeroTailIndex,

    #[error("constant coefficient is not a scalar multiple of the identity")]
    NonScalarHead,

    #[error("constant coefficient must vanish for the zero-head class (|A_0| = {0})")]
    NonZeroHead(f64),

    #[error("scalar head |a_0| = {0} must be < 1")]
    HeadNotContractive(f64),

    #[error("denominator constant term {0} is too close to zero")]
    NearZeroDenominator(f64),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("inadmissible G: constraint value {0} is negative")]
    InadmissibleG(f64),

    #[error("empty sample set")]
    EmptySampleSet,

    #[error("grid of {grid} points is too coarse for degree {degree} (need grid > pi * degree)")]
    GridTooCoarse { grid: usize, degree: usize },

    #[error("zero direction")]
    ZeroDirection,

    #[error("linear form is not normalized for the domain (norm {0} > 1)")]
    IllNormalized(f64),

    #[error("multi-index table too large: {vars} variables, degree {degree}")]
    TooManyTerms { vars: usize, degree: usize },

    #[error("manifest: {0}")]
    Manifest(String),
}

pub type Result<T> = std::result::Result<T, BohrError>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> BohrError {
    BohrError::InvalidParameter {
        name,
        reason: reason.into(),
    }
}

pub(crate) fn check_radius(r: f64) -> Result<()> {
    if (0.0..1.0).contains(&r) {
        Ok(())
    } else {
        Err(BohrError::RadiusOutOfRange(r))
    }
}
