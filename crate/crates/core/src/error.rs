use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MathError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("mismatched operands: {0}")]
    Mismatch(&'static str),
    #[error("valuation of a value indistinguishable from zero at precision {0}")]
    ZeroValuation(i64),
    #[error("precision underflow: achieved {achieved}, required {required}")]
    PrecisionUnderflow { achieved: i64, required: i64 },
    #[error("point is not certified inside the maximal ideal (coordinate {coordinate})")]
    NotInMaximalIdeal { coordinate: usize },
    #[error("series diverges at the infinite place: deg u_{position} = {degree} is not < s_{position}*q/(q-1)")]
    Divergent { position: usize, degree: usize },
    #[error("cost guard: {0}")]
    CostGuard(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T> = std::result::Result<T, MathError>;

impl MathError {
    /// Errors caused by malformed input rather than by the mathematics.
    pub fn is_usage(&self) -> bool {
        matches!(self, MathError::InvalidInput(_) | MathError::Parse(_))
    }
}
