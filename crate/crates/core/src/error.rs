use thiserror::Error;

/// Errors raised by construction and by the operations of this crate.
///
/// Indices carried in error payloads are 1-based, matching the JSON formats.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum QsoError {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid dimension {0}: {1}")]
    InvalidDimension(usize, &'static str),

    #[error("coefficient array is not cubic: {0}")]
    NotCubic(String),

    #[error("non-finite value {value} at {location}")]
    NonFinite { location: String, value: f64 },

    #[error("negative coefficient P[{i},{j},{k}] = {value}")]
    NegativeCoefficient { i: usize, j: usize, k: usize, value: f64 },

    #[error("coefficients are not symmetric: P[{i},{j},{k}] = {pij} but P[{j},{i},{k}] = {pji}")]
    NotSymmetric {
        i: usize,
        j: usize,
        k: usize,
        pij: f64,
        pji: f64,
    },

    #[error("slice ({i},{j}) sums to {sum}, expected 1")]
    NotStochastic { i: usize, j: usize, sum: f64 },

    #[error("not a simplex point: {0}")]
    NotInSimplex(String),

    #[error("operator is not Volterra: P[{i},{j},{k}] = {value} with k outside {{i, j}}")]
    NotVolterra { i: usize, j: usize, k: usize, value: f64 },

    #[error("invalid skew-symmetric matrix: {0}")]
    InvalidSkew(String),

    #[error("invalid family index {0}, expected 1..=6")]
    InvalidFamily(u8),

    #[error("parameter {name} = {value} outside [0, 1]")]
    ParameterOutOfRange { name: &'static str, value: f64 },

    #[error("orthogonality preservation is only decided on the 2-simplex (m = 3), got m = {0}")]
    DimensionUnsupported(usize),

    #[error("operator is not orthogonality preserving: {0}")]
    NotOrthogonalityPreserving(String),

    #[error("image of vertex e_{vertex} is {distance:e} away from every vertex")]
    VertexImageNotVertex { vertex: usize, distance: f64 },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid kernel: {0}")]
    InvalidKernel(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("space of {0} atoms is too large for subset enumeration (limit {1})")]
    TooLarge(usize, usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("malformed input: {0}")]
    Format(String),
}

pub type Result<T, E = QsoError> = std::result::Result<T, E>;
