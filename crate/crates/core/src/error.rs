use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("syntax error at position {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("polynomial exceeds limits: {0}")]
    Limit(String),

    #[error("exact test needs {needed} evaluations, budget is {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },

    #[error("no value assigned to variable x{0}")]
    MissingVariable(u32),

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("algebras differ: {0:?} vs {1:?}")]
    AlgebraMismatch(Vec<usize>, Vec<usize>),

    #[error("polynomial is not multihomogeneous")]
    NotMultihomogeneous,

    #[error("polynomial is constant")]
    ConstantPolynomial,

    #[error("subspace is not a Lie ideal")]
    NotLieIdeal,

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("numerical failure: {0}")]
    Numeric(String),

    #[error("coefficient overflow: {0}")]
    Overflow(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
