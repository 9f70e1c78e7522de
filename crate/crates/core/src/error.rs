use thiserror::Error;

/// Errors raised by the library. Variants carry enough context to be
/// reported on the command line without the original inputs.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("duplicate symbol `{0}` in alphabet")]
    DuplicateSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("word `{0}` is not admissible")]
    NotAdmissible(String),
    #[error("the forbidden words leave no bi-infinite sequence")]
    EmptyLanguage,
    #[error("state `{state}` has two outgoing edges labeled `{symbol}`")]
    NotRightResolving { state: String, symbol: String },
    #[error("state `{0}` lacks an incoming or an outgoing edge")]
    NotEssential(String),
    #[error("property (D) fails: {0}")]
    PropertyDFailed(String),
    #[error("g is undefined at past `{0}`")]
    Undefined(String),
    #[error("vertex chain is reducible: {0}")]
    Reducible(String),
    #[error("zero mass: {0}")]
    ZeroMass(String),
    #[error("vertex set is not transition complete: {0}")]
    NotTransitionComplete(String),
    #[error("vertex set is not residually contractive: {0}")]
    NotContractive(String),
    #[error("domain mismatch: {0}")]
    DomainMismatch(String),
    #[error("transported weights not expressible: {0}")]
    Unresolvable(String),
    #[error("a word of length {0} is too short for the coding window")]
    TooShort(usize),
    #[error("table depth {found} is too small (need at least {needed})")]
    DepthTooSmall { needed: usize, found: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    /// The variant name, for diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::EmptyAlphabet { .. } => "EmptyAlphabet",
            Error::DuplicateSymbol { .. } => "DuplicateSymbol",
            Error::UnknownSymbol { .. } => "UnknownSymbol",
            Error::UnknownState { .. } => "UnknownState",
            Error::NotAdmissible { .. } => "NotAdmissible",
            Error::EmptyLanguage { .. } => "EmptyLanguage",
            Error::NotRightResolving { .. } => "NotRightResolving",
            Error::NotEssential { .. } => "NotEssential",
            Error::PropertyDFailed { .. } => "PropertyDFailed",
            Error::Undefined { .. } => "Undefined",
            Error::Reducible { .. } => "Reducible",
            Error::ZeroMass { .. } => "ZeroMass",
            Error::NotTransitionComplete { .. } => "NotTransitionComplete",
            Error::NotContractive { .. } => "NotContractive",
            Error::DomainMismatch { .. } => "DomainMismatch",
            Error::Unresolvable { .. } => "Unresolvable",
            Error::TooShort { .. } => "TooShort",
            Error::DepthTooSmall { .. } => "DepthTooSmall",
            Error::InvalidArgument { .. } => "InvalidArgument",
            Error::InvariantViolation { .. } => "InvariantViolation",
            Error::Parse { .. } => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
