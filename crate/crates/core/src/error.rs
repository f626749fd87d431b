use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("kernel{kernel} row {row} sums to {sum} (deviation {deviation:e})")]
    RowSum {
        kernel: u8,
        row: usize,
        sum: f64,
        deviation: f64,
    },

    #[error("kernel{kernel} row {row} has negative entry {value} at column {col}")]
    NegativeEntry {
        kernel: u8,
        row: usize,
        col: usize,
        value: f64,
    },

    #[error("idle index out of range: idle{user} = {index}, alphabet size {size}")]
    IdleOutOfRange { user: u8, index: usize, size: usize },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid distribution: {0}")]
    Distribution(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("nonpositive denominator in rho for user {user}: {numerator_term} >= {denominator_term}")]
    Denominator {
        user: u8,
        numerator_term: f64,
        denominator_term: f64,
    },

    #[error("negative rho ({0}) has zero outage; use the epsilon = 0 path")]
    NegativeRho(f64),

    #[error("lambda {lambda} exceeds converse threshold {lambda_bar:.4}")]
    BeyondConverse { lambda: f64, lambda_bar: f64 },

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
