use thiserror::Error;

/// Errors raised by game construction, index computation and file parsing.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input: wrong widths, out-of-range values, inconsistent files.
    #[error("input error: {0}")]
    Input(String),

    /// The operation is undefined for this game (e.g. a non-monotone table).
    #[error("domain error: {0}")]
    Domain(String),

    /// A hard size cap fired.
    #[error("capacity exceeded: {what} (cap {cap})")]
    Capacity { what: String, cap: String },

    /// The requested numerics mode cannot handle this game.
    #[error("mode error: {0}")]
    Mode(String),

    /// A documented precondition of the operation does not hold.
    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn capacity(what: impl Into<String>, cap: impl ToString) -> Self {
        Error::Capacity {
            what: what.into(),
            cap: cap.to_string(),
        }
    }

    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse { .. } | Error::Input(_) => 2,
            Error::Capacity { .. } => 3,
            Error::Domain(_) | Error::Mode(_) | Error::Precondition(_) => 4,
            Error::Io(_) => 1,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            line: err.line(),
            column: err.column(),
            message: err.to_string(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
