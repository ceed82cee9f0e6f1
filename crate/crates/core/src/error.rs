use thiserror::Error;

/// Errors raised by the geometric constructions and their validators.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("point {x} lies outside the domain [{lo}, {hi}]")]
    Domain { x: String, lo: String, hi: String },

    #[error("invalid field `{field}`: {reason}")]
    Invalid { field: &'static str, reason: String },

    #[error("incompatible domains: {0}")]
    IncompatibleDomains(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("consistency error: {0}")]
    Consistency(String),

    #[error("budget exceeded: {0}")]
    Budget(String),

    #[error("{location}: {message}")]
    Schema { location: String, message: String },
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field,
            reason: reason.into(),
        }
    }

    /// Re-reports a validation error found inside the element at `location`
    /// of an input document.
    pub(crate) fn at(self, location: impl Into<String>) -> Self {
        let location = location.into();
        match self {
            Error::Invalid { field, reason } => Error::Schema {
                location: format!("{location}.{field}"),
                message: reason,
            },
            Error::Schema { location: inner, message } => Error::Schema {
                location: format!("{location}.{inner}"),
                message,
            },
            other => Error::Schema {
                location,
                message: other.to_string(),
            },
        }
    }

    pub(crate) fn precondition(reason: impl Into<String>) -> Self {
        Error::Precondition(reason.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
