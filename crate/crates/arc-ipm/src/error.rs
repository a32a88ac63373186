//! Crate-wide error type.

use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by problem evaluation, linear algebra, step selection and
/// the benchmark front end.
#[derive(Debug, Error)]
pub enum Error {
    /// A function or derivative evaluation produced NaN/inf, or a computed
    /// quantity left the representable range. `index` identifies the
    /// offending coordinate or component when one is known.
    #[error("non-finite value in {context}{}", fmt_index(.index))]
    NumericalFailure {
        context: String,
        index: Option<usize>,
    },

    /// The KKT matrix was declared numerically singular during factorization.
    #[error("KKT matrix numerically singular (rcond estimate {cond_estimate:.3e})")]
    SingularKkt { cond_estimate: f64 },

    /// Step selection exhausted its backtracking budget without finding an
    /// acceptable step angle.
    #[error("no acceptable step angle after {backtracks} backtracks: {reason}")]
    StepFailure { backtracks: usize, reason: String },

    /// A problem name did not resolve in the registry.
    #[error("unknown problem {name:?}; available: {}", available.join(", "))]
    UnknownProblem {
        name: String,
        available: Vec<String>,
    },

    #[error("invalid arguments: {0}")]
    InvalidArguments(String),

    /// A profile was requested over an empty record set.
    #[error("no records to profile")]
    EmptyInput,

    #[error("I/O error on {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed CSV at {path}, line {line}: {what}")]
    Csv {
        path: String,
        line: usize,
        what: String,
    },
}

impl Error {
    pub fn non_finite(context: impl Into<String>) -> Self {
        Error::NumericalFailure {
            context: context.into(),
            index: None,
        }
    }

    pub fn non_finite_at(context: impl Into<String>, index: usize) -> Self {
        Error::NumericalFailure {
            context: context.into(),
            index: Some(index),
        }
    }
}

fn fmt_index(index: &Option<usize>) -> String {
    match index {
        Some(i) => format!(" (component {i})"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
