use thiserror::Error;

/// Errors raised by the library operations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    CompositeModulus(u64),

    #[error("modulus {q} exceeds the discrete-log table limit {limit}")]
    TableLimitExceeded { q: u64, limit: u64 },

    #[error("character index {index} out of range for modulus {q} (expected 0..={max})", max = q - 2)]
    InvalidCharacterIndex { index: u64, q: u64 },

    #[error("operation requires a nontrivial character")]
    TrivialCharacter,

    #[error("window length {v} out of range for modulus {q} (expected 1..={q})")]
    WindowTooLarge { v: u64, q: u64 },

    #[error("sieve limit {limit} is outside the supported range 2..={max}")]
    LimitTooLarge { limit: u64, max: u64 },

    #[error("sieve level guard violated: z^C = {z}^{c} exceeds U = {u}")]
    GuardViolated { z: f64, c: f64, u: u64 },

    #[error("brute-force instance too large: {pairs} (n, u) pairs exceed the guard {max}")]
    InstanceTooLarge { pairs: u64, max: u64 },

    #[error("degenerate parameters: U = {u} < 2, so the sieve level z is undefined")]
    DegenerateParams { u: u64 },

    #[error("unknown bound variant {0:?}")]
    UnknownVariant(String),

    #[error("value not representable even in log space")]
    Overflow,

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
