use thiserror::Error;

/// Errors raised across the toolkit.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("exponent denominator {0} is not a power of the characteristic")]
    NonPPowerDenominator(String),
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("characteristic mismatch: {0} vs {1}")]
    CharMismatch(u64, u64),
    #[error("variable sets differ")]
    VariableMismatch,
    #[error("element has level {have}, exceeds ring level {ring}")]
    LevelTooLow { have: u32, ring: u32 },
    #[error("resource budget exceeded: {0}")]
    ResourceExceeded(String),
    #[error("{0} is not a power of the characteristic")]
    NotPPower(u64),
    #[error("quotient has infinite colength")]
    InfiniteColength,
    #[error("need at least {need} rows, got {got}")]
    InsufficientRows { need: usize, got: usize },
    #[error("linear system is singular")]
    SingularSystem,
    #[error("element involves more than one variable")]
    MultiVariable,
    #[error("chain relation violated at index {0}")]
    RelationViolated(usize),
    #[error("shape or length mismatch: {0}")]
    Mismatch(String),
    #[error("constraint violated: {0}")]
    ConstraintViolation(String),
    #[error("coefficient ring is not perfect: {0}")]
    ImperfectRing(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Invalid(e.to_string())
    }
}
