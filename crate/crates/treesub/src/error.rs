//! Error type shared by the whole pipeline.
//!
//! Errors carry the process exit code used by the command line driver:
//! parse errors exit with 4, precondition gates with 2, exceeded caps with 3.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Input file could not be parsed. Carries a 1-based line number.
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// A mathematical precondition does not hold (e.g. the substitution is
    /// not primitive, not irreducible Pisot, or not parageometric).
    #[error("precondition not met: {0}")]
    Gate(String),

    /// A configured search cap was exhausted before the computation settled.
    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    /// Internal consistency violation (indicates a bug upstream).
    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } => 4,
            Error::Gate(_) => 2,
            Error::CapExceeded(_) => 3,
            Error::Invariant(_) => 1,
            Error::Io(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
