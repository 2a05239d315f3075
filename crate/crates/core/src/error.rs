use thiserror::Error;

/// Errors produced by the numerical routines and the reporting layer.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter lies outside the admissible set of the estimate.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported dimension {0}")]
    UnsupportedDimension(usize),

    /// An adaptive routine gave up before reaching its tolerance. The best
    /// available value and its error estimate are kept for diagnostics.
    #[error("{context}: tolerance not met (best value {value:e}, error estimate {err_est:e})")]
    Convergence {
        context: String,
        value: f64,
        err_est: f64,
    },

    #[error("non-finite value {value} at {point}")]
    Evaluation { point: String, value: f64 },

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// Prefix the context of a convergence or evaluation failure.
    pub(crate) fn within(self, outer: impl AsRef<str>) -> Self {
        match self {
            Error::Convergence {
                context,
                value,
                err_est,
            } => Error::Convergence {
                context: format!("{}: {}", outer.as_ref(), context),
                value,
                err_est,
            },
            Error::Evaluation { point, value } => Error::Evaluation {
                point: format!("{} ({})", point, outer.as_ref()),
                value,
            },
            other => other,
        }
    }

    /// True for failures of the numerical engines (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::Convergence { .. } | Error::Evaluation { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
