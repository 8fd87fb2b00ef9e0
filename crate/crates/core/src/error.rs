use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    /// A search invariant failed in check mode. `dump` describes the forest.
    #[error("invariant violated: {what}\n{dump}")]
    Invariant { what: String, dump: String },
    #[error("structural error: {0}")]
    Structural(String),
    #[error("oracle refused: {0}")]
    OracleLimit(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
