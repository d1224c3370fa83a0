use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum KernelError {
    #[error("{0} is not a supported prime modulus")]
    NotPrime(u64),
    #[error("structural error: {0}")]
    Structural(String),
    #[error("ring mismatch: operands live in different rings")]
    RingMismatch,
    #[error("parse error at offset {offset}: {message}")]
    Parse { offset: usize, message: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
}
