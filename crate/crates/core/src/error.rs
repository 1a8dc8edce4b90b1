use thiserror::Error;

/// Errors raised by the geometry, construction and analysis layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition of an operation was violated by the caller.
    #[error("usage error: {0}")]
    Usage(String),

    #[error("division by zero")]
    DivisionByZero,

    /// The brute-force stabilizer would need more candidates than allowed.
    #[error("oracle out of range: {needed} candidates exceed the budget of {budget}")]
    OracleOutOfRange { needed: u128, budget: u128 },

    #[error("unsupported: {0}")]
    Unsupported(String),

    /// The automorphism engine refuses graphs above its vertex ceiling.
    #[error("graph has {vertices} vertices, above the ceiling of {ceiling}")]
    TooLarge { vertices: usize, ceiling: usize },

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Usage(msg.into()))
}
