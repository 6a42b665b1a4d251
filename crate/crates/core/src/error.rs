use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("the token `i` needs a coefficient field containing a square root of -1")]
    ImaginaryUnitUnavailable,
    #[error("exponent overflow (limit {limit})")]
    ExponentOverflow { limit: u32 },
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("field specialization failed: {0}")]
    BadSpecialization(String),
    #[error("coefficient budget exceeded ({0}); retry over a prime field")]
    CoefficientBudget(String),
    #[error("degenerate data: {0}; resample the data or weight seed")]
    DegenerateData(String),
    #[error("unlucky specialization: {0}")]
    UnluckySpecialization(String),
    #[error("non-isolated singularity: {0}")]
    NonIsolated(String),
    #[error("inconclusive numeric result: {0}")]
    Inconclusive(String),
    #[error("ambiguous endpoint clusters ({0}); rerun with a new gamma")]
    AmbiguousClusters(String),
    #[error("{failed} of {total} paths failed")]
    TooManyFailedPaths { failed: usize, total: usize },
    #[error("engine disagreement: {0}")]
    EngineDisagreement(String),
    #[error("polytope error: {0}")]
    Polytope(String),
    #[error("stratification data error: {0}")]
    Stratification(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
