use thiserror::Error;

use crate::richardson::Ordering;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("grid needs at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("invalid domain [{left}, {right}]")]
    InvalidDomain { left: f64, right: f64 },

    #[error("value vector has {got} entries but the grid has {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },

    #[error("non-finite value at node {0}")]
    NonFinite(usize),

    #[error("degenerate jump: u_left == u_right == {0}")]
    DegenerateJump(f64),

    #[error("grids cover different domains: [{0}, {1}] vs [{2}, {3}]")]
    DomainMismatch(f64, f64, f64, f64),

    #[error("grids share no common nodes")]
    NoCommonNodes,

    #[error("snapshots taken at different times: {0} vs {1}")]
    TimeMismatch(f64, f64),

    #[error("invalid CFL number {0}: need 0 < lambda <= 1")]
    InvalidCfl(f64),

    #[error("invalid advection speed {0}: need a > 0")]
    InvalidSpeed(f64),

    #[error("{scheme} needs at least {needed} nodes, grid has {got}")]
    StencilTooWide {
        scheme: &'static str,
        needed: usize,
        got: usize,
    },

    #[error("final time must be positive, got {0}")]
    InvalidFinalTime(f64),

    #[error("solver blew up at step {step} (t = {time}): non-finite value at node {node}")]
    Unstable { step: usize, time: f64, node: usize },

    #[error("indeterminate rate: denominator norm is zero")]
    IndeterminateRate,

    #[error("invalid norm ratio {0}: need a finite positive value")]
    InvalidRatio(f64),

    #[error("no valid rate for {ordering} ordering with R = {ratio}")]
    NoValidRate { ordering: Ordering, ratio: f64 },

    #[error("spacings must be positive and pairwise distinct: {0}, {1}, {2}")]
    InvalidTriple(f64, f64, f64),

    #[error("invalid refinement ratio {0}: need 0 < r < 1")]
    InvalidRefinementRatio(String),

    #[error("need at least {needed} resolutions, got {got}")]
    TooFewResolutions { needed: usize, got: usize },

    #[error("degenerate similarity profile: {0}")]
    DegenerateProfile(&'static str),

    #[error("hypergeometric series lost precision: condition estimate {condition:.3e} at z = {z}")]
    PrecisionLoss { z: f64, condition: f64 },

    #[error("hypergeometric parameter {0} is a nonpositive integer")]
    PoleParameter(f64),

    #[error("hypergeometric series did not converge within {0} terms")]
    SeriesDiverged(usize),

    #[error("stretch factors must be >= 1, got {0}")]
    InvalidStretch(f64),

    #[error("tail truncation error {bound:.3e} exceeds {tolerance:.1e} of the integral")]
    TruncationError { bound: f64, tolerance: f64 },

    #[error("quadrature failed to converge: error estimate {0:.3e}")]
    QuadratureFailed(f64),

    #[error("({intervals} intervals) is not divisible for refinement ratio {ratio}")]
    Divisibility { intervals: u64, ratio: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    /// True for failures of the numerics (blow-up, lost precision, missing root), as
    /// opposed to malformed input.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::Unstable { .. }
                | Error::IndeterminateRate
                | Error::NoValidRate { .. }
                | Error::PrecisionLoss { .. }
                | Error::SeriesDiverged(_)
                | Error::TruncationError { .. }
                | Error::QuadratureFailed(_)
        )
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
