use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {0} out of range")]
    IndexOutOfRange(usize),

    #[error("negative probability p[{index}] = {value:e}")]
    NegativeProbability { index: usize, value: f64 },

    #[error("probabilities sum to {0} instead of 1")]
    NotNormalized(f64),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("witness violates symmetric assumptions: {0}")]
    AssumptionViolation(String),

    #[error("witness expectation {0:e} is not positive; flip the witness sign")]
    NonpositiveDenominator(f64),

    #[error("matrix is not X-type")]
    NotXType,

    #[error("unphysical family point: p1 = {0:e}")]
    Unphysical(f64),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("no intersection: {0}")]
    NoIntersection(String),

    #[error("infeasible construction: {0}")]
    Infeasible(String),

    #[error("unsupported regime: {0}")]
    Unsupported(String),

    #[error("all antidiagonal correlations vanish")]
    Degenerate,

    #[error("boundary assembly gap of {gap:e} between {left} and {right}")]
    Assembly { left: String, right: String, gap: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
