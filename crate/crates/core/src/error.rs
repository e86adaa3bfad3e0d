use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("position {index} out of range for length {len}")]
    OutOfRange { index: usize, len: usize },

    #[error("symbol {symbol} is not in the alphabet of size {sigma}")]
    InvalidSymbol { symbol: u32, sigma: u32 },

    #[error("occurrence {nth} of symbol {symbol} does not exist")]
    NotFound { symbol: u32, nth: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),

    #[error("malformed serialized data: {0}")]
    Decode(&'static str),
}
