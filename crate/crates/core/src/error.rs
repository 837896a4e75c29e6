use crate::optimizer::OptimizationResult;

/// Errors reported by the library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("field `{0}` is not finite")]
    NonFiniteField(&'static str),
    #[error("magnitude `{0}` must be >= 0")]
    NegativeMagnitude(&'static str),
    #[error("mean photon number must be >= 0 and finite")]
    NegativePhotonNumber,
    #[error("variance must be > 0")]
    NonPositiveVariance,
    #[error("numeric integration did not converge: {0}")]
    IntegrationDidNotConverge(String),
    /// The best point sits against a search bound; the carried result holds
    /// the value and state found there, with `boundary_flag` set.
    #[error("optimum within 1% of a search bound (best value {})", .0.value)]
    BoundaryOptimum(Box<OptimizationResult>),
    #[error("only {0} starts reached the best value; optimum not trusted")]
    NoConvergence(usize),
    #[error("insufficient sweep column: {0}")]
    InsufficientColumn(String),
    #[error("maximum-likelihood estimate at bracket edge in {0:.2}% of repetitions")]
    BracketExcludesOptimum(f64),
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
