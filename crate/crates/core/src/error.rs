use alloc::string::String;

/// Errors raised by the tower machinery.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("mask too large: m = {m} needs period 2^{k} > 63")]
    MaskTooLarge { m: u64, k: u32 },
    #[error("invalid seed: a seed must begin with 0, 1")]
    InvalidSeed,
    #[error("degenerate seed: the consumed prefix of length {len} is constant beyond index 1")]
    DegenerateSeed { len: u64 },
    #[error("seed too short: {needed} values needed, {available} available")]
    SeedTooShort { needed: u64, available: u64 },
    #[error("interval too large: {points} points exceeds the sweep budget of {budget}")]
    BudgetExceeded { points: u128, budget: u64 },
    #[error("incompatible L: {l} is not divisible by the common period {period}")]
    IncompatibleL { l: u64, period: u64 },
    #[error("duplicate level {0}")]
    DuplicateLevel(u64),
    #[error("no stabilization: profile up to n = {n_max} still changing at prefix cap {cap}")]
    NoStabilization { n_max: usize, cap: u64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn invalid(msg: &str) -> Error {
    Error::InvalidArgument(String::from(msg))
}
