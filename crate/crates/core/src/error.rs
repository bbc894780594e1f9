use thiserror::Error;

/// Errors raised while building, validating or evaluating a fractal
/// interpolation problem.
#[derive(Debug, Error, Clone, PartialEq)]
#[non_exhaustive]
pub enum Error {
    #[error("a partition needs at least 3 knots, got {0}")]
    TooFewKnots(usize),
    #[error("knots must be strictly increasing (x[{index}] = {value} does not exceed its predecessor)")]
    NonMonotoneKnots { index: usize, value: f64 },
    #[error("knot {index} is not finite")]
    NonFiniteKnot { index: usize },
    #[error("point {x} lies outside [{lo}, {hi}]")]
    OutOfDomain { x: f64, lo: f64, hi: f64 },
    #[error("interval index {index} is out of range for {intervals} intervals")]
    BadInterval { index: usize, intervals: usize },
    #[error("scaling sequence is not contractive: sup norm {norm} >= 1")]
    ScalingNotContractive { norm: f64 },
    #[error("level {level}: {what} misses the germ at {at} by {residual:e}")]
    EndpointMismatch {
        level: usize,
        what: String,
        at: f64,
        residual: f64,
    },
    #[error("ordinate {index} ({y}) does not match the germ value {fx}")]
    OrdinateMismatch { index: usize, y: f64, fx: f64 },
    #[error("Lipschitz-space condition violated at level {level}: ratio {ratio} >= 1/2")]
    LipConditionViolated { level: usize, ratio: f64 },
    #[error("level {level} has {got} scaling functions, partition has {expected} intervals")]
    IntervalCountMismatch {
        level: usize,
        expected: usize,
        got: usize,
    },
    #[error("level sequence is empty")]
    EmptyLevels,
    #[error("Hölder exponent must lie in (0, 1], got {0}")]
    BadExponent(f64),
    #[error("grid needs at least {required} points, got {got}")]
    EmptyGrid { required: usize, got: usize },
    #[error("sampled function grids do not match")]
    GridMismatch,
    #[error("trajectory depth must be at least 1")]
    DepthZero,
    #[error("tolerance must be positive, got {0}")]
    BadTolerance(f64),
    #[error("fixed-point iteration did not converge after {iterations} steps (last change {change:e})")]
    NoConvergence { iterations: usize, change: f64 },
    #[error("level sequence is not constant across levels")]
    NotStationary,
    #[error("perturbation too large: {0}")]
    PerturbationTooLarge(String),
    #[error("configurations use different partitions")]
    PartitionMismatch,
    #[error("configurations use different scaling sequences")]
    ScalingMismatch,
    #[error("knot vectors have different lengths ({0} vs {1})")]
    KnotCountMismatch(usize, usize),
    #[error("pair is degenerate: inputs differ by less than {0:e}")]
    DegeneratePair(f64),
    #[error("scaling sup norm {norm} exceeds the cap {cap}")]
    CapViolated { norm: f64, cap: f64 },
    #[error("invalid function specification: {0}")]
    BadFunction(String),
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Stable machine-readable name of the error kind.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::TooFewKnots(_) => "TooFewKnots",
            Error::NonMonotoneKnots { .. } => "NonMonotoneKnots",
            Error::NonFiniteKnot { .. } => "NonFiniteKnot",
            Error::OutOfDomain { .. } => "OutOfDomain",
            Error::BadInterval { .. } => "BadInterval",
            Error::ScalingNotContractive { .. } => "ScalingNotContractive",
            Error::EndpointMismatch { .. } => "EndpointMismatch",
            Error::OrdinateMismatch { .. } => "OrdinateMismatch",
            Error::LipConditionViolated { .. } => "LipConditionViolated",
            Error::IntervalCountMismatch { .. } => "IntervalCountMismatch",
            Error::EmptyLevels => "EmptyLevels",
            Error::BadExponent(_) => "BadExponent",
            Error::EmptyGrid { .. } => "EmptyGrid",
            Error::GridMismatch => "GridMismatch",
            Error::DepthZero => "DepthZero",
            Error::BadTolerance(_) => "BadTolerance",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::NotStationary => "NotStationary",
            Error::PerturbationTooLarge(_) => "PerturbationTooLarge",
            Error::PartitionMismatch => "PartitionMismatch",
            Error::ScalingMismatch => "ScalingMismatch",
            Error::KnotCountMismatch(..) => "KnotCountMismatch",
            Error::DegeneratePair(_) => "DegeneratePair",
            Error::CapViolated { .. } => "CapViolated",
            Error::BadFunction(_) => "BadFunction",
            Error::Config(_) => "Config",
            Error::Io(_) => "Io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
