use thiserror::Error;

/// Errors raised by field construction, arithmetic and the verification routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{what} size {size} exceeds the configured cap {cap}")]
    SizeLimit {
        what: &'static str,
        size: u32,
        cap: u32,
    },

    #[error("division by zero")]
    DivisionByZero,

    #[error("operands belong to different fields")]
    FieldMismatch,

    #[error("polynomial {modulus:#x} is not an irreducible polynomial of degree {degree}")]
    ReducibleModulus { modulus: u64, degree: u32 },

    #[error("invalid element encoding {0:?}")]
    Parse(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Two independent verification routes produced different answers.
    #[error("verification routes disagree: {0}")]
    RouteMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
