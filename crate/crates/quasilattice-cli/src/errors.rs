//! CLI error type: parse diagnostics with positions, plus library errors,
//! each mapped to a stable process exit code.

use std::fmt;

use quasilattice::Error as LibError;

#[derive(Debug)]
pub enum CliError {
    /// Malformed config or expression text, with 1-based position.
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    /// A command-line usage problem (unknown preset, missing argument).
    Usage(String),
    /// An error surfaced by the library.
    Lib(LibError),
}

impl CliError {
    pub fn parse(line: usize, col: usize, msg: impl Into<String>) -> CliError {
        CliError::Parse {
            line,
            col,
            msg: msg.into(),
        }
    }

    /// Stable exit codes: 2 parse, 3 validation, 4 budget, 5 io.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) => 2,
            CliError::Lib(e) => match e {
                LibError::Format(_) => 2,
                LibError::NotAUnit(_)
                | LibError::NotPisot(_)
                | LibError::UnsupportedField(_)
                | LibError::FieldMismatch
                | LibError::InvalidAutomorphism(_)
                | LibError::InvalidIfs(_) => 3,
                LibError::Intractable { .. } | LibError::BudgetExceeded { .. } => 4,
                LibError::Io(_) => 5,
            },
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Parse { line, col, msg } => {
                write!(f, "parse error at line {line}, column {col}: {msg}")
            }
            CliError::Usage(msg) => write!(f, "{msg}"),
            CliError::Lib(e) => write!(f, "{e}"),
        }
    }
}

impl From<LibError> for CliError {
    fn from(e: LibError) -> Self {
        CliError::Lib(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Lib(LibError::Io(e))
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
