use thiserror::Error;

/// Errors raised by the symbolization, reconstruction and evaluation routines.
#[derive(Debug, Error)]
pub enum AbbaError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown symbol {symbol:?} at position {position}")]
    UnknownSymbol { symbol: char, position: usize },

    #[error("{source_name}, line {line}: {message}")]
    Parse {
        source_name: String,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl AbbaError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        AbbaError::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, AbbaError>;
