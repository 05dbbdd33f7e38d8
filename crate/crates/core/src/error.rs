use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A certified result could not be produced at the requested precision.
    #[error("precision error: {msg} (retry at >= {suggested_bits} bits)")]
    Precision { msg: String, suggested_bits: u32 },

    /// A division by a quantity that vanished to working precision.
    #[error("singularity at n = {n}: {msg}")]
    Singularity { n: i64, msg: String },

    /// Numerical continuation stopped before reaching the target.
    #[error("integration stopped at t = {last_t}: {msg}")]
    Integration { last_t: String, msg: String },

    /// Unparseable decimal input or inconsistent configuration.
    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("report schema mismatch: {0}")]
    Schema(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn singular(n: i64, msg: impl Into<String>) -> Self {
        Error::Singularity { n, msg: msg.into() }
    }
}
