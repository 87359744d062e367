use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("quadrature did not converge for {what}: value {value:e}, error estimate {error_estimate:e}")]
    NonConvergence {
        what: String,
        value: f64,
        error_estimate: f64,
    },

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("hyperplane collection is not admissible: {0}")]
    NotAdmissible(String),

    /// The first position of a sweep already touches the target.
    #[error("start not disjoint: initial minimum gap {gap:e} does not exceed contact tolerance {tol:e}")]
    StartNotDisjoint { gap: f64, tol: f64 },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// True for errors caused by the caller's parameters rather than by
    /// numerics or I/O.
    pub fn is_parameter_error(&self) -> bool {
        matches!(
            self,
            Error::Domain(_) | Error::InvalidInput(_) | Error::NotAdmissible(_) | Error::StartNotDisjoint { .. }
        )
    }

    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. } | Error::Divergent(_))
    }
}
