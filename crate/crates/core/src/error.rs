use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field of size {size} exceeds the configured cap {cap}")]
    FieldTooLarge { size: u128, cap: u64 },
    #[error("polynomial is not monic")]
    NotMonic,
    #[error("polynomial is reducible")]
    Reducible,
    #[error("operation is undefined for the zero polynomial")]
    ZeroPolynomial,
    #[error("element does not belong to this field context")]
    ContextMismatch,
    #[error("inversion of zero")]
    ZeroInverse,
    #[error("polynomials are not coprime")]
    NotCoprime,
    #[error("no irreducible polynomial of degree {degree} remains")]
    Exhausted { degree: usize },
    #[error("only {available} pairwise coprime degree-{m} polynomials available, {requested} requested")]
    InsufficientCoprime { m: usize, requested: usize, available: String },
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("route unavailable: {0}")]
    RouteUnavailable(String),
    #[error("no inner-code family for q={q}, m={m}, r={r}, strength {s}")]
    NoFamily { q: u32, m: usize, r: usize, s: usize },
    #[error("enumeration of {count} items exceeds cap {cap}")]
    CapExceeded { count: u128, cap: u64 },
    #[error("empty pattern space")]
    EmptyPatternSpace,
    #[error("malformed erasure pattern: {0}")]
    MalformedPattern(String),
    #[error("erasure pattern is not admissible")]
    NotAdmissible,
    #[error("linear system is singular")]
    Singular,
    #[error("matrix is not square")]
    NotSquare,
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("operation requires a {0} form code")]
    WrongForm(&'static str),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("artifact digest mismatch (expected {expected}, found {found})")]
    DigestMismatch { expected: String, found: String },
}

pub type Result<T> = std::result::Result<T, Error>;
