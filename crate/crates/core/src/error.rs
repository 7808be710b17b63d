use thiserror::Error;

/// Errors raised by the metrology engine.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("numeric failure: {0}")]
    NumericFailure(String),

    #[error("precondition violated: {0}")]
    PreconditionViolation(String),

    /// The QFI matrix is (numerically) degenerate, so quantities that need its
    /// inverse are refused instead of pseudo-inverted.
    #[error(
        "sloppy model: smallest QFI eigenvalue {min_eigenvalue:.3e} is below {threshold:.3e}; \
         reduce the number of estimated parameters or reparametrize"
    )]
    SloppyModel { min_eigenvalue: f64, threshold: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
