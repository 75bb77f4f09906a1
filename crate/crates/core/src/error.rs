use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("unknown system label `{0}`")]
    UnknownLabel(String),

    #[error("system label `{0}` appears more than once")]
    DuplicateLabel(String),

    #[error("operator is not square on system `{0}`")]
    NotSquareOn(String),

    #[error("not a permutation of the existing systems: {0}")]
    NotAPermutation(String),

    #[error("operator is not Hermitian (relative deviation {deviation:.3e} > {tol:.1e})")]
    NotHermitian { deviation: f64, tol: f64 },

    #[error("operator is not positive semidefinite (minimum eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("Kraus set is not trace preserving (deviation {deviation:.3e})")]
    NotTracePreserving { deviation: f64 },

    #[error("operator is not an isometry (deviation {deviation:.3e})")]
    NotIsometry { deviation: f64 },

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("not a valid superchannel: {0}")]
    NotAValidSuperchannel(String),

    #[error("realization residual {residual:.3e} exceeds tolerance {tol:.1e}")]
    ResidualTooLarge { residual: f64, tol: f64 },

    #[error("POVM elements do not sum to the identity (deviation {deviation:.3e})")]
    IncompleteDecomposition { deviation: f64 },

    #[error("parameter out of range: {0}")]
    OutOfRange(String),

    #[error("random generation failed after {attempts} attempts")]
    GenerationFailed { attempts: usize },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("unknown document kind `{0}`")]
    UnknownKind(String),

    #[error("I/O error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn dims(msg: impl Into<String>) -> Self {
        Error::DimensionMismatch(msg.into())
    }

    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse {
            location: location.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
