use std::fmt;

use thiserror::Error;

/// A line/column position in a source text (both 1-based).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Error {
    #[error("syntax error at {pos}: {message}")]
    Syntax { pos: Pos, message: String },

    #[error("duplicate declaration of {name} at {pos}")]
    DuplicateDeclaration { name: String, pos: Pos },

    #[error("unknown module {0}")]
    UnknownModule(String),

    #[error("sort error at {pos}: {message}")]
    SortCheck { pos: Pos, message: String },

    #[error("ambiguous parse of `{text}`; candidates: {}", candidates.join(" ; "))]
    AmbiguousParse { text: String, candidates: Vec<String> },

    #[error("unknown rule label {0}")]
    UnknownRuleLabel(String),

    #[error("unknown strategy {0}")]
    UnknownStrategy(String),

    #[error("unsupported feature: {0}")]
    UnsupportedFeature(String),

    #[error("unbound mu-calculus variable {0}")]
    UnboundMuVariable(String),

    #[error("variable {0} occurs under an odd number of negations in its fixpoint")]
    NonMonotoneFixpoint(String),

    #[error("no normal form reached after {0} steps")]
    NonTermination(usize),

    #[error("ill-formed term: {0}")]
    IllFormed(String),

    #[error("state budget of {0} states exceeded")]
    StateBudgetExceeded(usize),

    #[error("the strategy admits no execution from the initial state")]
    EmptyBehavior,
}

impl Error {
    pub(crate) fn syntax(pos: Pos, message: impl Into<String>) -> Self {
        Error::Syntax { pos, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
