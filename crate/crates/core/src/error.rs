use thiserror::Error;

/// Errors produced by graph construction, mechanism evaluation and the verifiers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// Malformed input: out-of-range vertex, invalid family parameter, bad text encoding.
    #[error("invalid input: {0}")]
    Input(String),

    /// An exhaustive computation would exceed its configured limit.
    #[error("{what} at n = {n} exceeds the enumeration cap of {cap}; use the sampler instead")]
    Capacity { what: String, n: usize, cap: usize },

    /// A precondition of a verifier does not hold (e.g. a mechanism that is not symmetric).
    #[error("precondition failed: {0}")]
    Precondition(String),

    /// An internal invariant was violated during evaluation.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn capacity(what: impl Into<String>, n: usize, cap: usize) -> Self {
        Error::Capacity {
            what: what.into(),
            n,
            cap,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
