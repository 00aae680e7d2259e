use thiserror::Error;

/// Crate-wide error type. Variants are grouped by how a caller should react:
/// `Usage`/`Parse` mean the request itself was malformed, the rest mean a
/// construction or verification precondition failed.
#[derive(Debug, Error)]
pub enum Error {
    #[error("field tag mismatch: expected {expected:?}, got {found:?}")]
    TagMismatch {
        expected: crate::field::FieldTag,
        found: crate::field::FieldTag,
    },

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimMismatch { expected: usize, found: usize },

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("{activation} has no power-series expansion")]
    NoSeries { activation: String },

    #[error("series coefficient of index {index} is zero, so the requested construction is degenerate")]
    ZeroCoefficient { index: usize },

    #[error("no nonzero series coefficient of index >= {from} found while scanning up to {limit}")]
    NoUsableCoefficient { from: usize, limit: usize },

    #[error("difference order {order} with step {step:e} would be dominated by rounding error (order <= {max_order}, step >= {min_step:e} required)")]
    CancellationGuard {
        order: usize,
        step: f64,
        max_order: usize,
        min_step: f64,
    },

    #[error("construction precondition violated: {0}")]
    Precondition(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("could not parse {0}")]
    Parse(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    /// Process exit code this error maps to under the CLI contract:
    /// 2 for usage and parse problems, 1 for failed verifications,
    /// 3 for everything that is a violated construction precondition.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Parse(_) | Error::Io { .. } => 2,
            Error::Verification(_) => 1,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
