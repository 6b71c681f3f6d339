use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("resource ceiling exceeded: {0}")]
    ResourceLimit(String),
    #[error("division by zero: {0}")]
    DivisionByZero(String),
    #[error("internal consistency failure: {0}")]
    Internal(String),
    #[error("not solvable: {0}")]
    Unsolvable(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
