use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("width mismatch: expected {expected}, found {found}")]
    WidthMismatch { expected: usize, found: usize },
    #[error("invalid vector width {0} (supported: 1..=64)")]
    InvalidWidth(usize),
    #[error("bits set beyond width {width}")]
    BitsBeyondWidth { width: usize },
    #[error("coordinate {coord} out of range 1..={width}")]
    CoordinateOutOfRange { coord: usize, width: usize },
    #[error("affine system is inconsistent")]
    Inconsistent,
    #[error("affine system is not in canonical form")]
    NotCanonical,
    #[error("codimension {codim} out of range 0..={ambient}")]
    CodimOutOfRange { codim: usize, ambient: usize },
    #[error("arity {arity} exceeds the maximum of {max}")]
    ArityTooLarge { arity: usize, max: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("invalid parameter: {0}")]
    InvalidParam(String),
    #[error("degenerate composition: {0}")]
    Degenerate(String),
    #[error("budget exhausted: {0}")]
    Budget(String),
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
