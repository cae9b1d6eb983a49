use alloc::string::String;

/// Errors raised by the node generators, domain maps and solvers.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("expected {expected} nodes for order {order}, got {actual}")]
    NodeCount {
        order: u32,
        expected: usize,
        actual: usize,
    },

    #[error("node {index} at ({x}, {y}) lies outside the {domain}")]
    OutsideDomain {
        index: usize,
        x: f64,
        y: f64,
        domain: &'static str,
    },

    #[error("point ({x}, {y}) lies outside the {domain}")]
    PointOutside { x: f64, y: f64, domain: &'static str },

    #[error("invalid Bos array: {0}")]
    InvalidBosArray(String),

    #[error("invalid domain parameters: {0}")]
    InvalidDomain(String),

    #[error("basis family {family} is not defined on the {domain}")]
    FamilyDomainMismatch {
        family: &'static str,
        domain: &'static str,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("non-finite value in collocation matrix at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("collocation matrix is singular to working precision (sigma_min = {sigma_min:e})")]
    Singular { sigma_min: f64 },

    #[error("local system of hexagon {hexagon} is singular (sigma_min = {sigma_min:e})")]
    SingularSegment { hexagon: usize, sigma_min: f64 },

    #[error("mesh Vandermonde is rank deficient: only {rank} of {needed} columns independent")]
    RankDeficient { rank: usize, needed: usize },

    #[error("Newton iteration failed to converge for the degree {degree} polynomial")]
    NoConvergence { degree: usize },

    #[error("singular value decomposition did not converge")]
    SvdFailed,

    #[error("reference values vanish on the evaluation grid")]
    ZeroReference,
}

pub type Result<T> = core::result::Result<T, Error>;
