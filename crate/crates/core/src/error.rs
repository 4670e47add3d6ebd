use std::fmt;

use thiserror::Error;

use crate::plonka::Violation;

/// Failure while reading a formula.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at byte {position}")]
pub struct ParseError {
    pub position: usize,
    pub kind: ParseErrorKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseErrorKind {
    Syntax(String),
    UnknownConnective(String),
    ArityMismatch {
        connective: String,
        expected: usize,
        found: usize,
    },
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::Syntax(msg) => write!(f, "syntax error: {msg}"),
            ParseErrorKind::UnknownConnective(name) => write!(f, "unknown connective `{name}`"),
            ParseErrorKind::ArityMismatch {
                connective,
                expected,
                found,
            } => write!(
                f,
                "connective `{connective}` takes {expected} argument(s), found {found}"
            ),
        }
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("line {line}: {message}")]
    Load { line: usize, message: String },

    #[error("invalid signature: {0}")]
    Signature(String),

    #[error("invalid algebra: {0}")]
    Algebra(String),

    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),

    #[error("unbound variable `{0}`")]
    UnboundVariable(String),

    #[error("connective `{0}` is not in the signature")]
    UnknownConnective(String),

    #[error("element mapping: {0}")]
    Mapping(String),

    #[error("invalid direct system ({} violation(s)); first: {}", .0.len(), .0[0])]
    InvalidSystem(Vec<Violation>),

    #[error("term is not bivariate: {0}")]
    NotBivariate(String),

    #[error("not a partition function: {0}")]
    NotPartitionFunction(String),

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("invalid sequence `{0}`: only `l` and `r` are allowed")]
    Sequence(String),

    #[error("invalid fragment: {0}")]
    Fragment(String),

    #[error("{0}")]
    Antitheorem(String),

    #[error("Plonka sums are undefined for constants (`{0}` is 0-ary)")]
    NullaryInSum(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
