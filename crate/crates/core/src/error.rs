use thiserror::Error;

/// Library-wide error type.
///
/// The CLI maps these onto exit codes: invalid input -> 1,
/// unsupported field -> 2, internal invariant violation -> 3.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid discriminant {0}: must be congruent to 0 or 1 mod 4")]
    BadDiscriminantParity(i64),

    #[error("invalid discriminant {0}: expected a negative discriminant")]
    ExpectedNegative(i64),

    #[error("invalid discriminant {0}: expected a positive fundamental discriminant")]
    ExpectedPositiveFundamental(i64),

    #[error("invalid discriminant {0}: not a fundamental discriminant")]
    NotFundamental(i64),

    #[error("{0} is not an odd prime")]
    BadPrime(u32),

    #[error("discriminant mismatch: {0} vs {1}")]
    DiscriminantMismatch(i64, i64),

    #[error("unsupported field: d = {d} with {p}-class rank {rho} >= 1 (real quadratic)")]
    UnsupportedField { d: i64, p: u32, rho: u32 },

    #[error("search bound exhausted: {0}")]
    SearchExhausted(String),

    #[error("no integer solution of x^2 - y^2 d = 4 r^p for d = {d}, r = {r}, p = {p}")]
    NoNormSolution { d: i64, r: u64, p: u32 },

    #[error("{q} is not a {p}-admissible conductor component over d = {d}")]
    NotAdmissible { d: i64, q: u64, p: u32 },

    #[error("generator not coprime to modulus {0}")]
    NotCoprime(u64),

    #[error("modulus {0} too large for local residue computation")]
    ModulusTooLarge(u64),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("expected a subspace of codimension {expected}, got {got}")]
    WrongCodimension { expected: usize, got: usize },

    #[error("internal invariant violation: {0}")]
    Invariant(String),

    #[error("cache I/O: {0}")]
    CacheIo(#[from] std::io::Error),

    #[error("cache format: {0}")]
    CacheFormat(String),
}

pub type Result<T> = std::result::Result<T, Error>;
