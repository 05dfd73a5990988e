use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u32),
    #[error("{0} is not a prime power")]
    NotPrimePower(u32),
    #[error("modulus {0} is reducible")]
    ReducibleModulus(String),
    #[error("modulus has degree {found}, expected {expected}")]
    DegreeMismatch { expected: u32, found: u32 },
    #[error("modulus is not monic")]
    NotMonic,
    #[error("coefficient {coefficient} is not a residue mod {p}")]
    CoefficientOutOfRange { coefficient: u32, p: u32 },
    #[error("GF({p}^{k}) exceeds the supported field size")]
    FieldTooLarge { p: u32, k: u32 },
    #[error("index {index} is not an element of GF({q})")]
    NotInField { index: u32, q: u32 },
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0}")]
    OutOfRange(String),
    #[error("no excluded-monomial description covers (q={q}, m={m}, v={v})")]
    NotCovered { q: u32, m: u32, v: u32 },
    #[error("bad lambdas: {0}")]
    BadLambdas(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("internal disagreement: {0}")]
    InternalDisagreement(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
