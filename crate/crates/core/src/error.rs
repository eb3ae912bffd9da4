use thiserror::Error;

/// Errors shared by every solver in this crate.
///
/// `Parse` and `InvalidInput` mean the caller handed us something malformed;
/// `Capacity` means the instance is well formed but larger than the
/// exponential-table or enumeration budget of the routine that rejected it.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("{0}")]
    InvalidInput(String),

    #[error("{what} is {requested}, above the supported limit of {limit}")]
    Capacity {
        what: &'static str,
        requested: u64,
        limit: u64,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub fn capacity(what: &'static str, requested: u64, limit: u64) -> Self {
        Error::Capacity {
            what,
            requested,
            limit,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
