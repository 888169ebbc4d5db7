//! Error types shared across the toolkit.

use thiserror::Error;

/// Unified error type for all library operations.
#[derive(Debug, Error)]
pub enum Error {
    /// A parameter is outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Required data is missing or inconsistent with the requested evaluation.
    #[error("configuration error: {0}")]
    Config(String),

    /// An input violates a documented precondition (e.g. non-normalized
    /// eigenvectors, asymmetric matrix).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Mesh assembly failed; the message names the offending element.
    #[error("mesh assembly error: {0}")]
    Assembly(String),

    /// The iterative eigensolver did not meet its residual contract.
    #[error("eigensolver did not converge after {iterations} iterations; worst residual {worst_residual:.3e}")]
    NonConvergence {
        iterations: usize,
        worst_residual: f64,
        best_eigenvalues: Vec<f64>,
    },

    /// Text-format parsing failure (mesh files, configs, tabulated data).
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("scenario stage '{stage}' failed in '{scenario}': {source}")]
    Stage {
        scenario: String,
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn assembly(msg: impl Into<String>) -> Self {
        Error::Assembly(msg.into())
    }

    pub fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }

    /// Wrap an error with the scenario/stage context it occurred in.
    pub fn in_stage(self, scenario: &str, stage: &str) -> Self {
        Error::Stage {
            scenario: scenario.to_string(),
            stage: stage.to_string(),
            source: Box::new(self),
        }
    }
}
