use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid working medium: {0}")]
    InvalidMedium(String),

    /// `first` and `second` are 1-based level numbers.
    #[error("levels {first} and {second} cross at lambda* = {lambda}")]
    CrossingDetected {
        first: usize,
        second: usize,
        lambda: f64,
    },

    #[error("no temperature gap: J = {j} must exceed h_a/4 = {}", h_a / 4.0)]
    NoGap { j: f64, h_a: f64 },

    #[error("formula outside its domain: {0}")]
    Domain(String),

    #[error("could not bracket {what}: search exceeded T = {limit}")]
    BracketFailure { what: &'static str, limit: f64 },

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
    },

    #[error("config {field}: {message}")]
    Config { field: String, message: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    /// True for numerical failures (bracketing, convergence) as opposed to bad input.
    pub fn is_solver_failure(&self) -> bool {
        matches!(
            self,
            Error::BracketFailure { .. } | Error::NoConvergence { .. }
        )
    }

    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be positive and finite",
        })
    }
}

pub(crate) fn non_negative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::InvalidParameter {
            name,
            value,
            reason: "must be non-negative and finite",
        })
    }
}
