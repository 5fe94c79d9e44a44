//! Error types shared across the library.

use thiserror::Error;

/// Syntax-level failure while reading a theory file or a term string.
///
/// Positions are 1-based and refer to the source text handed to the parser.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{col}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, col: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            col,
            message: message.into(),
        }
    }
}

/// Failure while validating a theory's declarations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error("invalid identifier `{0}`")]
    InvalidIdentifier(String),
    #[error("duplicate atom `{0}`")]
    DuplicateAtom(String),
    #[error("duplicate generator `{0}`")]
    DuplicateGenerator(String),
    #[error("duplicate owner `{0}`")]
    DuplicateOwner(String),
    #[error("unknown atom `{atom}` in the type of generator `{generator}`")]
    UnknownAtom { atom: String, generator: String },
    #[error("equation sides are not parallel: {lhs_dom} -> {lhs_cod} vs {rhs_dom} -> {rhs_cod}")]
    IllTypedEquation {
        lhs_dom: String,
        lhs_cod: String,
        rhs_dom: String,
        rhs_cod: String,
    },
    #[error("equation is ill-typed: {0}")]
    EquationType(#[from] TypeError),
    #[error("an ownership theory needs at least one owner")]
    NoOwners,
}

/// Failure while typechecking a term.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TypeError {
    #[error("unknown generator `{0}`")]
    UnknownGenerator(String),
    #[error("unknown atom `{0}`")]
    UnknownAtom(String),
    #[error("unknown owner `{0}`")]
    UnknownOwner(String),
    #[error("composition mismatch: left yields {left_cod} but right expects {right_dom}")]
    SeqMismatch { left_cod: String, right_dom: String },
    #[error("terms are not parallel: {0} -> {1} vs {2} -> {3}")]
    NotParallel(String, String, String, String),
    #[error("mixed ownership in word {0}: expected every atom to belong to {1}")]
    MixedOwnership(String, String),
}

/// Failure in a ledger operation.
#[derive(Debug, Error)]
pub enum LedgerError {
    #[error("cannot mint a coin of value 0")]
    MintZero,
    #[error("position {0} is out of range for a frontier of {1} coins")]
    BadPosition(usize, usize),
    #[error("positions overlap: {0} selected twice")]
    OverlappingPositions(usize),
    #[error("split point {k} is out of range for a coin of value {value}")]
    BadSplit { k: u64, value: u64 },
    #[error("cannot merge coins owned by `{0}` and `{1}`: regrouping is per-owner")]
    MixedMerge(String, String),
    #[error("transaction body expects {expected} but the selected coins provide {found}")]
    DomainMismatch { expected: String, found: String },
    #[error("stale transaction: packaged against {expected} but the frontier is {found}")]
    StaleTransaction { expected: String, found: String },
    #[error("transaction leaves an empty collection on the frontier")]
    EmptyCoinOnFrontier,
    #[error("line {line}: {message}")]
    Corrupt { line: usize, message: String },
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Failure in the exhaustive morphism enumerator.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("enumeration exceeded the cap of {0} isomorphism classes")]
    ClassCapExceeded(usize),
}

/// Any failure the library can produce.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Theory(#[from] TheoryError),
    #[error(transparent)]
    Type(#[from] TypeError),
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
}
