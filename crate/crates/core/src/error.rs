use thiserror::Error;

/// Errors raised by module construction, transformations and estimation.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("singular gauge matrix: {0}")]
    InvalidGauge(String),

    #[error("log-radius {rho} outside the domain {domain}")]
    Domain { rho: String, domain: String },

    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),

    #[error("cyclic vector search failed after {attempts} attempts (seed {seed})")]
    CyclicSearchFailed { attempts: usize, seed: u64 },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Stable machine-readable tag used in JSON error documents.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid-input",
            Error::Parse { .. } => "parse",
            Error::InvalidGauge(_) => "invalid-gauge",
            Error::Domain { .. } => "domain",
            Error::BudgetExceeded(_) => "budget-exceeded",
            Error::CyclicSearchFailed { .. } => "cyclic-search-failed",
            Error::HypothesisViolated(_) => "hypothesis-violated",
            Error::UnknownCatalog(_) => "unknown-catalog",
            Error::InvalidParameter(_) => "invalid-parameter",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
