use thiserror::Error;

/// Error type shared by all modules of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Malformed or inconsistent input (wrong lengths, unbound variables, bad file contents).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A size guard was exceeded; the computation was refused rather than attempted.
    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    /// The requested quantity is not defined for this input (e.g. all-zero spectrum).
    #[error("undefined quantity: {0}")]
    UndefinedQuantity(String),

    /// An internal invariant failed (solver did not converge, witness rejected).
    #[error("internal error: {0}")]
    Internal(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
