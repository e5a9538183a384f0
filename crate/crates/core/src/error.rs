use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("signature mismatch: sigma {left} vs sigma {right}")]
    SignatureMismatch { left: i8, right: i8 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("zero divisor: {0}")]
    ZeroDivisor(String),

    #[error("not representable: {0}")]
    NotRepresentable(String),

    #[error("variable index {index} out of range for {dof} degrees of freedom")]
    IndexOutOfRange { index: usize, dof: usize },

    #[error("total degree {degree} exceeds the configured cap {cap}")]
    DegreeCapExceeded { degree: u32, cap: u32 },

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error("invalid probability table: {0}")]
    Validation(String),

    #[error("invalid state for outcome b{outcome}: probability {value} violates bound {bound}")]
    InvalidState {
        outcome: usize,
        value: f64,
        bound: String,
    },

    #[error("row {row}: {message}")]
    Row { row: usize, message: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("serialization: {0}")]
    Serialization(String),
}

impl Error {
    pub(crate) fn parse(position: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            position,
            message: message.into(),
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
