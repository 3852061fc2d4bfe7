use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FieldError {
    #[error("d = {0} does not define a quadratic field (must be squarefree and not 0 or 1)")]
    InvalidRadicand(i64),
    #[error("elements belong to different fields (d = {0} and d = {1})")]
    FieldMismatch(i64, i64),
    #[error("Q(sqrt({0})) is imaginary and has no fundamental unit of infinite order")]
    ImaginaryField(i64),
    #[error("continued-fraction period for d = {d} exceeds {cap} steps")]
    PeriodCap { d: i64, cap: usize },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SieveError {
    #[error("signature entries must be 0 or 12, got ({0},{1})")]
    InvalidSignature(i64, i64),
    #[error(transparent)]
    Field(#[from] FieldError),
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StrategyError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Sieve(#[from] SieveError),
    #[error(
        "Q(sqrt({0})) is imaginary of class number 1: non-constant signatures give R_q = 0 \
         for every auxiliary prime, so no finite list exists"
    )]
    ImaginaryClassNumberOne(i64),
    #[error("class-group exponent must be at least 1")]
    InvalidExponent,
    #[error("no auxiliary primes configured")]
    NoAuxiliaryPrimes,
    #[error("invalid configuration: {0}")]
    Config(String),
}
