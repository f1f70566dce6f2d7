use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} must be nonzero")]
    ZeroInput(&'static str),
    #[error("{0}")]
    Incompatible(String),
    #[error("budget exceeded: {0}")]
    BudgetExceeded(String),
    /// A value that must lie in a subfield did not, or a constructed object
    /// failed one of its own invariants. Always a bug, never a user error.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameter(msg.into()))
}
