use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("graph generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },
    #[error("bitstring length {got} does not match {expected} vertices")]
    LengthMismatch { expected: usize, got: usize },
    #[error("invalid bitstring character {0:?}")]
    InvalidBit(char),
    #[error("problem of size {n} exceeds the limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("graph has no vertices")]
    EmptyGraph,
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("invalid chain: {0}")]
    ChainInvalid(String),
    #[error("invalid coupling map dimensions: {0}")]
    InvalidDims(String),
    #[error("cannot route: {0}")]
    Unroutable(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimMismatch { expected: usize, got: usize },
    #[error("expected {expected} parameters, got {got}")]
    ParamCountMismatch { expected: usize, got: usize },
    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },
    #[error("io error: {0}")]
    Io(String),
    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
