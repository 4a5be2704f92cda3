use thiserror::Error;

#[derive(Debug, Error)]
pub enum CisingError {
    /// Malformed input: files, weight specs, CLI values.
    #[error("parse error: {0}")]
    Parse(String),

    /// Instance exceeds the configured size caps for exact evaluation.
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),

    /// A certified comparison could not be resolved at the precision cap.
    #[error("indeterminate at precision cap: {0}")]
    Indeterminate(String),

    /// Operation applied outside its mathematical domain (division by zero,
    /// singular gadget angle, weight off the required locus, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A noisy-oracle answer violated its stated contract.
    #[error("oracle contract violated: {0}")]
    OracleContract(String),
}

pub type Result<T> = std::result::Result<T, CisingError>;
