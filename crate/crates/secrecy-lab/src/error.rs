use thiserror::Error;

/// Errors produced by the numerical routines and the CLI front-end.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series expansion ran out of terms before meeting its tolerance.
    #[error("series did not converge: {0}")]
    SeriesDivergence(String),

    /// An adaptive quadrature exhausted its subdivision budget.
    #[error("quadrature did not converge: {0}")]
    QuadratureDivergence(String),

    /// A configuration value violates a `SystemParams` or sweep invariant.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for bad configuration, 3 for
    /// numeric non-convergence (validation failures exit 1 separately).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvalidConfig(_) | Error::Domain(_) => 2,
            Error::SeriesDivergence(_) | Error::QuadratureDivergence(_) => 3,
            Error::Io(_) => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
