use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("atom `{0}` declared twice")]
    DuplicateAtom(String),
    #[error("too many atoms: {count} declared, limit is {limit}")]
    TooManyAtoms { count: usize, limit: usize },
    #[error("atom index {0} is outside the universe")]
    AtomOutOfRange(usize),
    #[error("antecedent `{0}` is impossible")]
    ImpossibleAntecedent(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("value {0} is outside [0, 1]")]
    OutOfRange(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("constraint violated: {0}")]
    Constraint(String),
    #[error("conditioning event has zero probability: {0}")]
    ZeroConditioning(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Stable identifier for the variant, used in machine-readable reports.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::UnknownAtom(_) => "unknown-atom",
            Error::DuplicateAtom(_) => "duplicate-atom",
            Error::TooManyAtoms { .. } => "too-many-atoms",
            Error::AtomOutOfRange(_) => "atom-out-of-range",
            Error::ImpossibleAntecedent(_) => "impossible-antecedent",
            Error::Argument(_) => "argument",
            Error::OutOfRange(_) => "out-of-range",
            Error::Precondition(_) => "precondition",
            Error::Constraint(_) => "constraint",
            Error::ZeroConditioning(_) => "zero-conditioning",
            Error::Unsupported(_) => "unsupported",
            Error::Internal(_) => "internal",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
