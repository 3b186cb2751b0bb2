use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid algebra ({invariant}): {detail}")]
    InvalidAlgebra { invariant: &'static str, detail: String },

    #[error("unsupported preset `{0}`")]
    UnknownPreset(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("letter {letter} out of range 1..={max}")]
    LetterOutOfRange { letter: usize, max: usize },

    #[error("cannot parse rational `{0}`")]
    ParseRational(String),

    #[error("operation requires an abelian algebra")]
    NotAbelian,

    #[error("witness search exhausted after {draws} draws")]
    BudgetExhausted { draws: usize },

    #[error("membership violation: {0}")]
    Membership(String),

    #[error("certificate check failed: {0}")]
    Certificate(String),

    #[error("support of the test function leaves the quadrature box")]
    SupportViolation,
}
