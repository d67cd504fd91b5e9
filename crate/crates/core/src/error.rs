use thiserror::Error;

/// Errors raised by algebra, transcendental and solver operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AlgebraError {
    #[error("expected {expected} coefficients, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("coefficient {index} is not finite")]
    NonFinite { index: usize },
    #[error("level mismatch: {left} vs {right}")]
    LevelMismatch { left: u32, right: u32 },
    #[error("level {level} exceeds the supported maximum {max}")]
    LevelTooLarge { level: u32, max: u32 },
    #[error("element is zero")]
    ZeroElement,
    #[error("element is not pure imaginary (real part {real})")]
    NotPure { real: f64 },
    #[error("direction must be a unit pure imaginary element")]
    InvalidDirection,
    #[error("result overflows f64")]
    Overflow,
    #[error("negative real input has no principal direction; supply a fallback direction")]
    NoPrincipalDirection,
    #[error("element lies off the complex slice (residual {residual:e})")]
    NotInSlice { residual: f64 },
    #[error("argument is not C-dependent with the polynomial's slice")]
    OffSlice,
    #[error("no convergence (worst residual {worst_residual:e})")]
    NoConvergence { worst_residual: f64 },
    #[error("curve passes through the origin")]
    OriginOnPath,
    #[error("winding value {value} is not within 0.05 of an integer")]
    AmbiguousWinding { value: f64 },
    #[error("curve is not closed")]
    OpenCurve,
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid fixture: {0}")]
    InvalidFixture(String),
}

pub type Result<T> = std::result::Result<T, AlgebraError>;
