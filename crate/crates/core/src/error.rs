use thiserror::Error;

/// Errors raised by the arithmetic, descent and symbol routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("effort budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("{a} is not a square modulo {p}")]
    NotASquare { a: String, p: u64 },
    #[error("{p} divides {a}")]
    ZeroResidue { a: String, p: u64 },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("class number {0} is even; S-unit basis needs an odd class number")]
    OddClassNumberRequired(u64),
    #[error("sign constraints cannot be met: {0}")]
    Unsatisfiable(String),
    #[error("unsupported completion: {0}")]
    Unsupported(String),
    #[error("ternary form x^2 - ({a})y^2 - ({b})z^2 has no point over {place}")]
    NotLocallySolvable { a: i64, b: i64, place: String },
    #[error("no minimally ramified twist found for ({a}, {b})")]
    TwistSearchExhausted { a: i64, b: i64 },
    #[error("symbol not defined: {0}")]
    NotDefined(String),
    #[error("internal consistency check failed: {0}")]
    InternalInconsistency(String),
    #[error("local image search stopped at dimension {found} of {target} ({field})")]
    SearchBudgetExhausted { field: String, found: usize, target: usize },
    #[error("point is not on the curve: {0}")]
    NotOnCurve(String),
    #[error("invalid divisor: {0}")]
    InvalidDivisor(String),
    #[error("bad reduction at {0}")]
    BadReduction(u64),
    #[error("certificate chain incomplete: {0}")]
    Incomplete(String),
}

pub type Result<T> = std::result::Result<T, Error>;
