use thiserror::Error;

/// Errors raised by the numerical modules.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |M - M^H| = {max_deviation:e} exceeds {tol:e}")]
    NonHermitian { max_deviation: f64, tol: f64 },

    #[error("numerical failure: {0}")]
    NumericalFailure(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("state is not normalized: norm = {norm}")]
    UnnormalizedInput { norm: f64 },

    #[error("negative weight {value:e} at outcome {index}")]
    NegativeWeight { index: usize, value: f64 },

    #[error("probability {value} at outcome {index} lies outside [0, 1]")]
    ProbabilityOutOfRange { index: usize, value: f64 },

    #[error("total weight is zero")]
    ZeroTotalWeight,

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("invalid measurement config: {0}")]
    InvalidConfig(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("commuting-commutator assumption violated: residual {residual:e} exceeds {tol:e}")]
    AssumptionViolated { residual: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
