use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("exact enumeration unsupported: {0}")]
    UnsupportedExact(String),
    #[error("enumeration cap exceeded: {count} entries > cap {cap}")]
    CapExceeded { count: u128, cap: usize },
    #[error("zero vector has no norming functionals")]
    ZeroVector,
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("slot mismatch: {0}")]
    SlotMismatch(String),
    #[error("cannot shrink a tuple from k={from} to k={to}")]
    ShrinkNotAllowed { from: usize, to: usize },
    #[error("tuple is not an endomorphism: source and target spaces differ")]
    NotEndomorphism,
    #[error("invalid exponent p = {0}; require p >= 1")]
    InvalidExponent(f64),
    #[error("invalid k = {0}")]
    InvalidK(usize),
    #[error("dimension too large for the grid oracle: real parameter dim {0}")]
    DimensionTooLarge(usize),
    #[error("empty sample")]
    EmptySample,
    #[error("no witness tuple known for this space and (p, k)")]
    NoWitnessKnown,
    #[error("parse error: {0}")]
    Parse(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
