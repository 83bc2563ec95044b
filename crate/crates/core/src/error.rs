use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("expansion of the empty set is undefined")]
    EmptySet,
    #[error("invalid budget k={k} (must satisfy 1 <= k <= {max})")]
    InvalidBudget { k: usize, max: usize },
    #[error("clique of size {given} is too small; need more than {required}")]
    CliqueTooSmall { given: usize, required: usize },
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid exponents: {0}")]
    InvalidExponents(String),
    #[error("hyperedge arity {0} is too large for the sampling budget")]
    ArityTooLarge(usize),
    #[error("edge probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("enumeration budget exceeded: {needed} > {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
    #[error("instance too large for exhaustive search: {0}")]
    TooLarge(String),
    #[error("lambda must be non-negative")]
    NegativeLambda,
    #[error("left side is empty")]
    EmptyLeftSide,
    #[error("inner solver returned an empty set")]
    SolverStalled,
    #[error("no root: {0}")]
    NoRoot(String),
    #[error("p={p} and q={q} are not a valid coprime pair with 0 < p < q")]
    NotCoprime { p: u32, q: u32 },
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("degree targets are infeasible: {0}")]
    Infeasible(String),
    #[error("biregular completion stalled: {0}")]
    Stalled(String),
    #[error("parameter regime rejected: {0}")]
    ParameterRegime(String),
    #[error("no cover exists: {0}")]
    NoCover(String),
    #[error("set sizes exceed the lifting level: {0}")]
    SizeExceeded(String),
    #[error("invalid regime: {0}")]
    InvalidRegime(String),
    #[error("unsupported regime: {0}")]
    UnsupportedRegime(String),
    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
