use thiserror::Error;

/// Errors raised by constructors, scheme builders and the simulator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
    #[error("not found: {0}")]
    NotFound(String),
    #[error("not a PDA: {0}")]
    NotAPda(String),
    #[error("inconsistent design: {0}")]
    InconsistentDesign(String),
    #[error("instance too large: {0}")]
    TooLarge(String),
    #[error("field too small: need at least {required} elements, GF(2^16) has {available}")]
    FieldTooSmall { required: usize, available: usize },
    #[error("user {} knows {known} messages but the code assumes {required}", .user + 1)]
    /// `user` is 0-based; messages print it 1-based.
    ReductionGuarantee {
        user: usize,
        known: usize,
        required: usize,
    },
    #[error("user {} cannot decode (message {message})", .user + 1)]
    Decode { user: usize, message: u32 },
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidParameters(msg.into()))
}
