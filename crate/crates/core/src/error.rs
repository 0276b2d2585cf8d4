use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("non-rational literal {0:?} (expected \"p\" or \"p/q\")")]
    NonRational(String),
    #[error("binomial index must be non-negative, got {0}")]
    NegativeBinomialIndex(i64),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("unknown basis vector {0:?}")]
    UnknownBasis(String),
    #[error("element mixes even and odd components")]
    MixedParity,
    #[error("element must be non-zero")]
    ZeroElement,
    #[error("invalid Lie superalgebra data: {0}")]
    InvalidLieData(String),
    #[error("algebra kind {0} requires Lie superalgebra data")]
    MissingLieData(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("torsion polynomial for {0:?} must be monic")]
    NonMonicTorsion(String),
    #[error("operation requires a free carrier")]
    TorsionCarrier,
    #[error("inconsistent table: {0}")]
    InconsistentTable(String),
    #[error("window too small: {0}")]
    WindowTooSmall(String),
    #[error("constructed module fails its axiom check: {0}")]
    NotAModule(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("spec error: {0}")]
    Spec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
