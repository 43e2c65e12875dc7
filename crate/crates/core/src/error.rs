use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("malformed input: {0}")]
    Malformed(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("generators do not commute")]
    NotAbelian,

    #[error("element is not in the span of the basis")]
    NotInSpan,

    #[error("no decomposition found for m = {m} (step {step})")]
    NoDecomposition { m: u64, step: u8 },

    #[error("group is not in the class of coprime cyclic extensions of abelian groups")]
    NotInClass,

    #[error("oracle budget exhausted after {0} operations")]
    BudgetExceeded(u64),

    #[error("lookup table would exceed the memory cap ({0} entries)")]
    TableLimit(usize),

    #[error("prime type mismatch")]
    PTypeMismatch,

    #[error("matrix entry ({row}, {col}) violates the ring constraint: {msg}")]
    MatrixConstraint { row: usize, col: usize, msg: String },

    #[error("matrix is not invertible modulo p")]
    NotInvertible,

    #[error("matrix order is not coprime with p or exceeds the cap {cap}")]
    Condition3 { cap: u64 },

    #[error("decomposition over the basis failed: {0}")]
    CorruptedDecomposition(String),

    #[error("internal invariant violated: {0}")]
    InvariantBreach(String),

    #[error("enumeration too large: {0}")]
    TooLarge(String),
}

pub type Result<T> = std::result::Result<T, Error>;
