use std::fmt;

use crate::syntax::Name;

/// A syntax or resolution error with a 1-based source position.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub expected: Vec<String>,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)?;
        if !self.expected.is_empty() {
            write!(f, " (expected {})", self.expected.join(" or "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("`{0}` is declared more than once")]
    Redeclaration(Name),
    #[error("named concept `{0}` is defined in terms of itself")]
    RecursiveConcept(Name),
    #[error("unknown name `{0}`")]
    UnknownName(Name),
    #[error("unknown host type `{0}`")]
    UnknownHostType(Name),
    #[error("host type `{0}` would overlap incomparable host types")]
    HostLatticeOverlap(Name),
    #[error("primitive tag `{0}` is used with non-equivalent definitions")]
    PrimitiveConflict(Name),
    #[error("`{0}` in a disjoint declaration is neither atomic nor primitive")]
    NotDisjointable(Name),
    #[error("expansion exceeds the size ceiling of {0} constructors")]
    ExpansionTooLarge(usize),
    #[error("description still contains `{0}`; expand it against a knowledge base first")]
    NotExpanded(String),
    #[error("`{0}` is not interpreted by this world")]
    Uninterpreted(String),
    #[error("no counter-model exists: the description subsumes the graph")]
    Subsumed,
    #[error("the graph is incoherent and has no graphical world")]
    Incoherent,
    #[error("counter-model construction failed: {0}")]
    Construction(String),
    #[error("{0} variables exceed the brute-force ceiling of {1}")]
    TooManyVariables(usize, usize),
    #[error("malformed formula: {0}")]
    Formula(String),
    #[error("malformed DIMACS input: {0}")]
    Dimacs(String),
    #[error("malformed dump: {0}")]
    Dump(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
