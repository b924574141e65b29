use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter domain error: {0}")]
    ParameterDomain(String),

    #[error("matrix domain error: {0}")]
    MatrixDomain(String),

    #[error("data domain error at observation {index}: {message}")]
    DataDomain { index: usize, message: String },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("insufficient samples: {0}")]
    InsufficientSamples(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range (len {len})")]
    Index { index: usize, len: usize },

    #[error("unknown kernel `{0}`")]
    UnknownKernel(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("data error: {0}")]
    Data(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Coarse error classes reported by the command-line front end.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Config,
    Data,
    InsufficientSamples,
}

impl ErrorClass {
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorClass::Config => 2,
            ErrorClass::Data => 3,
            ErrorClass::InsufficientSamples => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorClass::Config => "config",
            ErrorClass::Data => "data",
            ErrorClass::InsufficientSamples => "insufficient-samples",
        }
    }
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::InsufficientSamples(_) => ErrorClass::InsufficientSamples,
            Error::DataDomain { .. } | Error::Data(_) | Error::Csv(_) | Error::Io(_) => {
                ErrorClass::Data
            }
            Error::ParameterDomain(_)
            | Error::MatrixDomain(_)
            | Error::Unsupported(_)
            | Error::Domain(_)
            | Error::Index { .. }
            | Error::UnknownKernel(_)
            | Error::Config(_)
            | Error::Json(_) => ErrorClass::Config,
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::ParameterDomain(msg.into())
    }
}
