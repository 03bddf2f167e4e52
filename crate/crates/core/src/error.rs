use thiserror::Error;

/// Errors raised by the library. Variant names are the domain error names
/// surfaced by the CLI and the C ABI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("InsufficientAlphabet: need {needed} symbols but q = {q}")]
    InsufficientAlphabet { needed: u64, q: u32 },
    #[error("BadCharacter: {0:?} is not a valid symbol")]
    BadCharacter(char),
    #[error("EmptyWord: words must have length at least 1")]
    EmptyWord,
    #[error("InvalidAlphabet: alphabet size must be at least 2, got {0}")]
    InvalidAlphabet(u32),
    #[error("DuplicateWord: {0} appears more than once")]
    DuplicateWord(String),
    #[error("NotReduced: {0} is a subword of {1}")]
    NotReduced(String, String),
    #[error("SingularCorrelationMatrix: determinant vanishes identically")]
    SingularCorrelationMatrix,
    #[error("DivisionByZero: evaluation at a pole")]
    DivisionByZero,
    #[error("NonExpandable: {0}")]
    NonExpandable(String),
    #[error("CapExceeded: {what} needs {needed} but the cap is {cap}")]
    CapExceeded { what: String, needed: String, cap: u64 },
    #[error("NonConvergence: {0}")]
    NonConvergence(String),
    #[error("NoRealRootFound: {0}")]
    NoRealRootFound(String),
    #[error("EmptySubshift: the subshift has no infinite sequences")]
    EmptySubshift,
    #[error("EmptySurvivorSet: every orbit escapes in finite time, the escape rate is infinite")]
    EmptySurvivorSet,
    #[error("InvalidHole: {0}")]
    InvalidHole(String),
    #[error("NotIrreducible: {0}")]
    NotIrreducible(String),
    #[error("NotAllowedWord: {0}")]
    NotAllowedWord(String),
    #[error("InvalidArgument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// The bare variant name, e.g. `"InsufficientAlphabet"`.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InsufficientAlphabet { .. } => "InsufficientAlphabet",
            Error::BadCharacter(_) => "BadCharacter",
            Error::EmptyWord => "EmptyWord",
            Error::InvalidAlphabet(_) => "InvalidAlphabet",
            Error::DuplicateWord(_) => "DuplicateWord",
            Error::NotReduced(..) => "NotReduced",
            Error::SingularCorrelationMatrix => "SingularCorrelationMatrix",
            Error::DivisionByZero => "DivisionByZero",
            Error::NonExpandable(_) => "NonExpandable",
            Error::CapExceeded { .. } => "CapExceeded",
            Error::NonConvergence(_) => "NonConvergence",
            Error::NoRealRootFound(_) => "NoRealRootFound",
            Error::EmptySubshift => "EmptySubshift",
            Error::EmptySurvivorSet => "EmptySurvivorSet",
            Error::InvalidHole(_) => "InvalidHole",
            Error::NotIrreducible(_) => "NotIrreducible",
            Error::NotAllowedWord(_) => "NotAllowedWord",
            Error::InvalidArgument(_) => "InvalidArgument",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
