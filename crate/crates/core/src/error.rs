use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A square matrix over Z_b had no inverse.
    #[error("matrix is singular over Z_{base}")]
    Singular { base: u32 },

    /// Two matrices (or a matrix and a vector) had incompatible shapes or bases.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// An operation requiring arithmetic in the field Z_b was given a composite base.
    #[error("base {0} is not prime")]
    NonPrimeBase(u32),

    /// An index or digit argument fell outside its valid range.
    #[error("argument out of range: {0}")]
    OutOfRange(String),

    /// The requested base is not supported by this operation.
    #[error("unsupported base {base}: {reason}")]
    UnsupportedBase { base: u32, reason: &'static str },

    /// The requested point count is not a Fibonacci number >= 2.
    #[error("{0} is not a Fibonacci number >= 2")]
    NotFibonacci(u64),

    /// A point set did not live on the grid an operation expects.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// An operation that needs at least one point was given none.
    #[error("point set is empty")]
    EmptySet,

    /// Input exceeds the configured size cap of an exhaustive algorithm.
    #[error("input too large: {0}")]
    TooLarge(String),

    /// The point set is not permutation-structured (x-coordinates must be
    /// exactly {{0, 1/N, ..., (N-1)/N}}, each once).
    #[error("not permutation-structured: {0}")]
    NotPermutationStructured(String),

    /// A closed-form bound was evaluated outside its domain.
    #[error("domain error: {0}")]
    DomainError(String),

    /// A malformed serialized point set, box or matrix.
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
