use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("rank-deficient matrix: |R[{col},{col}]| = {value:e} is below tolerance")]
    RankDeficient { col: usize, value: f64 },
    #[error("enumeration of {size} items exceeds the cap of {cap}")]
    TooLarge { size: u128, cap: u64 },
    #[error("degenerate codebook: d_max^2 = 0 (single-symbol codebook)")]
    DegenerateCodebook,
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
