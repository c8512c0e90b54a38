use thiserror::Error;

use crate::ir::UnifyError;

/// Every diagnostic the library can produce.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{line}:{col}: syntax error: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("sort error: {0}")]
    Sort(String),
    #[error("invalid query: {0}")]
    Query(String),
    #[error("catamorphism `{name}`: {msg}")]
    Schema { name: String, msg: String },
    #[error("catamorphism `{name}` is not functional and total at the bound: {witness}")]
    NotFunctional { name: String, witness: String },
    #[error("abstraction: {0}")]
    Abstraction(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error("evaluation budget exceeded: {0}")]
    Budget(String),
    #[error(transparent)]
    Unify(#[from] UnifyError),
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Short stable name of the variant, used in structured diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Syntax { .. } => "syntax",
            Error::Sort(_) => "sort",
            Error::Query(_) => "query",
            Error::Schema { .. } => "schema",
            Error::NotFunctional { .. } => "not-functional",
            Error::Abstraction(_) => "abstraction",
            Error::Internal(_) => "internal",
            Error::Config(_) => "config",
            Error::Budget(_) => "budget",
            Error::Unify(_) => "unify",
            Error::Io(_) => "io",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
