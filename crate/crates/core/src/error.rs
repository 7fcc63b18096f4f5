use thiserror::Error;

/// Errors raised by the toolkit.
///
/// Every message starts with the variant name so front ends can surface it
/// verbatim.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("RatioNotGreaterThanOne: {numerator}/{denominator} does not reduce to a ratio greater than 1")]
    RatioNotGreaterThanOne { numerator: u64, denominator: u64 },

    #[error("ZeroDenominator: ratio {numerator}/0 is undefined")]
    ZeroDenominator { numerator: u64 },

    #[error("InvalidRatio: cannot parse {0:?} as <b>/<a>")]
    InvalidRatio(String),

    #[error("LevelOutOfRange: {b}^{level} exceeds n = {n}")]
    LevelOutOfRange { level: u32, b: u64, n: u64 },

    #[error("NotAChainStart: {b} divides {start}")]
    NotAChainStart { start: u64, b: u64 },

    #[error("ElementOutOfRange: {value} is not in [1, {n}]")]
    ElementOutOfRange { value: u64, n: u64 },

    #[error("TooLargeForOracle: size {size} exceeds the oracle limit {limit}")]
    TooLargeForOracle { size: usize, limit: usize },

    #[error("InvalidProbability: p = {0} is not in [0, 1]")]
    InvalidProbability(f64),

    #[error("LambdaOutOfRange: lambda = {0} is not in [0, 1]")]
    LambdaOutOfRange(f64),

    #[error("DomainError: {0}")]
    DomainError(String),
}

pub type Result<T> = std::result::Result<T, Error>;
