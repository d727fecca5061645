use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A linear solve did not reach the requested residual.
    #[error("linear solver failed: residual {residual:e} exceeds tolerance {tolerance:e}")]
    Solver { residual: f64, tolerance: f64 },

    #[error("{what} did not converge after {iterations} iterations (last iterate {last}, residual {residual:e})")]
    NoConvergence {
        what: &'static str,
        iterations: usize,
        last: f64,
        residual: f64,
    },

    /// Picard iteration stalled; `history` holds the relative update of every sweep.
    #[error("Picard iteration did not converge after {} sweeps (last relative update {:e})", .history.len(), .history.last().copied().unwrap_or(f64::NAN))]
    Picard { history: Vec<f64> },

    #[error("invalid uptake model: {0}")]
    InvalidModel(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("validation failed: {}", .0.join("; "))]
    Validation(Vec<String>),

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("point outside the domain: {0}")]
    Domain(String),

    #[error("evaluation at the singular point y = 0")]
    SingularPoint,

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("mode error: {0}")]
    Mode(String),

    #[error("unsupported study: {0}")]
    UnsupportedStudy(String),

    /// Wraps a solver error with the identifier of the scenario that produced it.
    #[error("scenario {scenario}: {source}")]
    Scenario {
        scenario: String,
        #[source]
        source: Box<Error>,
    },

    #[error("I/O error on {}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the input rather than by a numerical failure.
    pub fn is_user_error(&self) -> bool {
        match self {
            Error::Validation(_)
            | Error::Parse { .. }
            | Error::Config(_)
            | Error::UnsupportedStudy(_)
            | Error::Io { .. } => true,
            Error::Scenario { source, .. } => source.is_user_error(),
            _ => false,
        }
    }
}
