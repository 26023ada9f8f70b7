use thiserror::Error;

/// Failure modes of the numerical and physical routines.
///
/// Values are carried as `f64` regardless of the scalar type used for the
/// computation so the error stays non-generic.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    #[error("divergence in {what}: {detail}")]
    Divergence { what: &'static str, detail: String },

    #[error("{what} did not converge: {detail}")]
    Convergence { what: &'static str, detail: String },

    #[error("{what} missed its tolerance: estimate {estimate:e}, error {error:e}")]
    Accuracy {
        what: &'static str,
        estimate: f64,
        error: f64,
    },

    #[error("regularization required: {0}")]
    RegularizationRequired(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn divergence(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Divergence {
            what,
            detail: detail.into(),
        }
    }

    pub(crate) fn convergence(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Convergence {
            what,
            detail: detail.into(),
        }
    }
}
