use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input text (edge list, graph6, catalog line).
    #[error("parse error{}: {msg}", line.map(|l| format!(" on line {l}")).unwrap_or_default())]
    Parse { line: Option<usize>, msg: String },

    /// The request cannot be satisfied for this input (disconnected graph,
    /// too few placeable links, link already present, ...).
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// A parameter lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("numerical failure: {0}")]
    Numerical(String),

    /// An exhaustive search would exceed its configured budget.
    #[error("budget exceeded: {what} requires {needed}, limit is {limit}")]
    Budget {
        what: &'static str,
        needed: u128,
        limit: u128,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse {
            line: None,
            msg: msg.into(),
        }
    }

    pub(crate) fn parse_at(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line: Some(line),
            msg: msg.into(),
        }
    }

    /// Attach a line number to a parse error that does not carry one yet.
    pub fn at_line(self, line: usize) -> Self {
        match self {
            Error::Parse { line: None, msg } => Error::Parse {
                line: Some(line),
                msg,
            },
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
