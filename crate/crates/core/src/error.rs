use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The modular fast path refuses a cell whose prime divides the conductor.
    #[error("non-integral risk; use exact path (p = {p} divides D = {d})")]
    NonIntegralRisk { d: u64, p: u64 },

    /// The modular fast path refuses weights at or beyond p − 1.
    #[error("last-slot weight; use exact path (weight {weight} > p - 3 for p = {p})")]
    LastSlotWeight { weight: u64, p: u64 },

    #[error("invalid search parameters: {0}")]
    InvalidParams(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
