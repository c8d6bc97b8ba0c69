use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("q = {0} is not an odd prime")]
    InvalidModulus(u32),
    #[error("{nu} is a square modulo {q}")]
    NotNonResidue { q: u32, nu: u32 },
    #[error("precision must be at least 2 π-digits, got {0}")]
    PrecisionTooSmall(i32),
    #[error("inversion of an element that is zero to precision")]
    InversionOfZero,
    #[error("cannot parse literal `{literal}`: {reason}")]
    Parse { literal: String, reason: String },
    #[error("operation requires a {expected} extension")]
    WrongCase { expected: &'static str },
    #[error("element is not a unit of O_D")]
    NotUnit,
    #[error("automorphism is not shallow for this order")]
    NotShallow,
    #[error("input lies outside the proven hypotheses: {0}")]
    Unsupported(String),
    #[error("enumeration budget exceeded: {size} > {budget}")]
    BudgetExceeded { size: u128, budget: u128 },
    #[error("working precision exhausted: {0}")]
    InsufficientPrecision(String),
    #[error("independent computations disagree: {0}")]
    RouteDisagreement(String),
}

pub type Result<T> = std::result::Result<T, Error>;
