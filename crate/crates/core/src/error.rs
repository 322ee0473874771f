use thiserror::Error;

/// Errors raised by the models and the experiment driver.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid or inconsistent configuration value.
    #[error("configuration error: {0}")]
    Config(String),
    /// A function was evaluated outside its domain (e.g. zero distance).
    #[error("domain error: {0}")]
    Domain(String),
    /// The physical model cannot be satisfied (e.g. laser cannot sustain the platform).
    #[error("infeasible model: {0}")]
    Infeasible(String),
    /// The platform cannot reach its operating altitude, so it has no horizontal region.
    #[error("empty feasible region: {0}")]
    EmptyRegion(String),
    /// Exhaustive enumeration would exceed the combinatorial guard.
    #[error("too many subsets to enumerate: {subsets} > {limit}")]
    TooManySubsets { subsets: u128, limit: u128 },
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Whether the error stems from a model that cannot be realised with the
    /// given constants (as opposed to malformed input).
    pub fn is_infeasible(&self) -> bool {
        matches!(self, Error::Infeasible(_) | Error::EmptyRegion(_))
    }

    pub fn is_config(&self) -> bool {
        matches!(self, Error::Config(_) | Error::Json(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
