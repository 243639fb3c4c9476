use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("zero input has no order at t = 0")]
    ZeroInput,
    #[error("rational function has a pole at t = 0")]
    PoleAtZero,
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u64),
    #[error("leading principal minor of size {k} is not invertible")]
    Degenerate { k: usize },
    #[error("dense size {n} exceeds the cap of {cap}")]
    SizeLimit { n: u64, cap: usize },
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("matrix is not triangular")]
    NotTriangular,
    #[error("triangular matrix has a non-invertible diagonal entry at {0}")]
    SingularDiagonal(usize),
    #[error("expansion needs about {estimate} bits, budget is {budget}")]
    BitBudgetExceeded { estimate: u128, budget: u128 },
    #[error("matrix is already non-degenerate; nothing to perturb")]
    NotDegenerate,
    #[error("perturbation direction must vanish at (0,0)")]
    NonZeroCorner,
    #[error("no perturbation direction made the matrix non-degenerate")]
    PerturbationFailed,
    #[error("total order at t = 0 is {0} < 0; determinant would have a pole")]
    NegativePoleOrder(i128),
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("base {0} is even")]
    EvenBase(u64),
    #[error("range {n} exceeds the brute-force limit {limit}")]
    RangeTooLarge { n: u64, limit: u64 },
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("operation requires {0}")]
    UnsupportedRing(&'static str),
    #[error("entry (0,0) of a defining matrix must be 1")]
    Normalization,
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, column: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: message.into(),
        }
    }
}
