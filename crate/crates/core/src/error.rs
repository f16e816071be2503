use thiserror::Error;

/// Errors produced by the numerical routines in this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A caller-supplied parameter violates its precondition.
    #[error("invalid argument `{name}`: {reason}")]
    InvalidArgument { name: &'static str, reason: String },

    /// A point lies outside the domain on which a function is defined.
    #[error("{value} lies outside the domain {domain}")]
    Domain { value: f64, domain: String },

    /// A numerical procedure failed to converge or produced a non-finite value.
    #[error("numeric failure in {routine}: {detail}")]
    Numeric {
        routine: &'static str,
        detail: String,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidArgument {
            name,
            reason: reason.into(),
        }
    }

    pub(crate) fn numeric(routine: &'static str, detail: impl Into<String>) -> Self {
        Error::Numeric {
            routine,
            detail: detail.into(),
        }
    }
}

/// Rejects non-finite or non-positive values.
pub(crate) fn require_positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::invalid(
            name,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}
