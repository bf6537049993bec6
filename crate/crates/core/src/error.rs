use thiserror::Error;

/// Errors raised by the solvers, oracles, and file readers.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Bad arguments to an operation (unknown vertex, invalid parameter).
    #[error("invalid input: {0}")]
    Input(String),

    /// A malformed graph or schedule file.
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    /// The exhaustive oracle refused an instance above its enumeration cap.
    #[error("instance too large for oracle: {groups} candidate groups exceed the cap of {cap}")]
    OracleTooLarge { groups: u128, cap: u128 },
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn parse(line: usize, column: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            column,
            message: msg.into(),
        }
    }

    /// Short machine-greppable tag for the error kind.
    pub fn tag(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::Parse { .. } => "parse",
            Error::OracleTooLarge { .. } => "oracle-too-large",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
