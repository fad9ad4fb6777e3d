use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension for {what}: got {dim}, need at least {min}")]
    InvalidDimension {
        what: &'static str,
        dim: usize,
        min: usize,
    },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "truncation tail too large for {what}: {population:e} exceeds tolerance {tolerance:e}"
    )]
    TruncationTail {
        what: &'static str,
        population: f64,
        tolerance: f64,
    },

    #[error("operator is not Hermitian (max |A - A†| = {deviation:e})")]
    NonHermitian { deviation: f64 },

    #[error("negative rate {0}")]
    NegativeRate(f64),

    #[error("trace drifted by {drift:e} during evolution (tolerance {tolerance:e})")]
    TraceDrift { drift: f64, tolerance: f64 },

    #[error("non-finite value encountered at t = {time}")]
    NonFinite { time: f64 },

    #[error("steady state not reached by t = {time}: residual {residual:e}")]
    NotConverged { residual: f64, time: f64 },

    #[error("series did not converge after {terms} terms (partial sum {partial_sum})")]
    SeriesNotConverged { terms: usize, partial_sum: f64 },

    #[error("stationary state is not unique in the reachable sector: {0}")]
    Singular(String),

    #[error("undefined: {0}")]
    Undefined(String),

    #[error("density matrix carries no two-mode structure")]
    MissingModeStructure,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("internal assertion failed: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code for the `simulate` binary: 2 for invalid input or
    /// domain errors, 3 for numerical non-convergence, 4 for internal
    /// failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotConverged { .. }
            | Error::TraceDrift { .. }
            | Error::NonFinite { .. }
            | Error::SeriesNotConverged { .. }
            | Error::Singular(_) => 3,
            Error::Internal(_) => 4,
            _ => 2,
        }
    }
}
