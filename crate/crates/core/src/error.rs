use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid path syntax at byte {pos}: {msg}")]
    PathSyntax { pos: usize, msg: String },

    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("channel index {index} out of range for n = {n}")]
    IndexOutOfRange { n: u32, index: u64 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid enclosure [{lo}, {hi}]")]
    InvalidEnclosure { lo: String, hi: String },

    #[error("resource budget exceeded: {0}")]
    Budget(String),

    #[error("incomplete database: {0}")]
    Incomplete(String),

    #[error("format error: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
