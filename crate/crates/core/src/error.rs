use crate::numeric::Valuation;

/// Errors raised by the library.
///
/// The CLI maps these onto exit codes: contract and input problems are spec
/// errors, regime and hypothesis failures are regime violations.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("operation requires an odd prime, got p = {0}")]
    EvenPrime(u64),

    #[error("q = {q} is not a power of p = {p}")]
    NotPowerOfP { p: u64, q: u64 },

    #[error("elements live over different primes ({0} vs {1})")]
    FieldMismatch(u64, u64),

    #[error("division by zero")]
    DivisionByZero,

    #[error("exponent must have zero constant term")]
    NonZeroConstantTerm,

    #[error("truncation budget exceeded: need order {needed}, cap is {cap}")]
    TruncationBudget { needed: usize, cap: usize },

    #[error("truncation orders differ ({0} vs {1})")]
    TruncationMismatch(usize, usize),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("regime violation: {0}")]
    RegimeViolation(String),

    #[error("hypothesis failure: {0}")]
    HypothesisFailure(String),

    #[error("insufficient precision: achieved {achieved}, requested {requested}")]
    InsufficientPrecision { achieved: Valuation, requested: Valuation },

    #[error("insufficient truncation: tail bound {achieved} is below requested precision {requested}")]
    InsufficientTruncation { achieved: Valuation, requested: Valuation },

    #[error("enumeration budget exceeded: {size} points exceeds cap {cap}")]
    EnumerationBudget { size: u128, cap: u128 },

    #[error("power sums inconsistent with expected degree {degree} at order {order}")]
    InconsistentSums { degree: usize, order: usize },

    #[error("point not supported: {0}")]
    UnsupportedPoint(String),

    #[error("newton polygon vertex at index {index} not certified by the available precision")]
    UncertifiedVertex { index: usize },

    #[error("p-adic root iteration failed to converge")]
    NoConvergence,
}

pub type Result<T> = std::result::Result<T, Error>;
