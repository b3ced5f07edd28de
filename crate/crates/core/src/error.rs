use std::path::PathBuf;

use num_rational::BigRational;

/// Errors raised across the toolkit.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid arguments: {0}")]
    InvalidArguments(String),

    #[error("dimension mismatch: expected n={expected}, got n={found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("expression is not label-symmetric (coefficients differ within subset size {size})")]
    NotLabelSymmetric { size: usize },

    #[error("expression is outside the span of the u-basis (residual {residual})")]
    NotInSpan { residual: BigRational },

    #[error("malformed input{}: {message}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Input { line: Option<u64>, message: String },

    #[error("probabilities sum to {sum}, outside 1 ± {tolerance}")]
    Normalization { sum: f64, tolerance: f64 },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn input(line: Option<u64>, message: impl Into<String>) -> Self {
        Error::Input {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::InvalidArguments(message.into())
    }

    /// True for failures of the mathematics rather than of the input format.
    pub fn is_domain_error(&self) -> bool {
        matches!(
            self,
            Error::NotInSpan { .. } | Error::NotLabelSymmetric { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
