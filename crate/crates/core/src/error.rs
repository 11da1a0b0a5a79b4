use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CensusError {
    #[error("order must be a positive integer")]
    ZeroOrder,
    /// Orders outside the covered shapes. Carries the exponent multiset.
    #[error("unsupported: {} prime factors (exponents {exponents:?})", exponents.iter().sum::<u32>())]
    Unsupported { exponents: Vec<u32> },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("arithmetic overflow: {0}")]
    Overflow(String),
    #[error("resource cap exceeded: {what} needs {needed}, cap is {cap}")]
    ResourceCap { what: String, needed: u64, cap: u64 },
}

impl CensusError {
    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        CensusError::Precondition(msg.into())
    }
}
