use std::fmt;
use std::path::PathBuf;

/// Where a document went wrong: a JSON path, and a position when the error
/// was found while reading the text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub field: String,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl Diagnostic {
    pub fn at_field(field: impl Into<String>, message: impl Into<String>) -> Self {
        Diagnostic { field: field.into(), line: None, column: None, message: message.into() }
    }
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let (Some(line), Some(column)) = (self.line, self.column) {
            write!(f, "line {line}, column {column}: ")?;
        }
        if !self.field.is_empty() && self.field != "." {
            write!(f, "{}: ", self.field)?;
        }
        f.write_str(&self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Read { path: PathBuf, source: std::io::Error },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error("malformed input: {0}")]
    Malformed(Diagnostic),
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] bodybar_core::Error),
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;

/// Exit status for `check` and all other commands.
pub mod exit {
    pub const OK: i32 = 0;
    /// A definitive negative answer.
    pub const NEGATIVE: i32 = 1;
    /// Malformed input or invalid options.
    pub const INPUT: i32 = 2;
    /// The combinatorial and linear verdicts disagree.
    pub const DISAGREEMENT: i32 = 3;
    /// An internal invariant failed.
    pub const INTERNAL: i32 = 4;
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use bodybar_core::Error as E;
        match self {
            CliError::Read { .. } | CliError::Malformed(_) | CliError::Usage(_) => exit::INPUT,
            CliError::Write { .. } => exit::INTERNAL,
            CliError::Core(e) => match e {
                E::NotTight { .. } | E::NotSparse { .. } => exit::NEGATIVE,
                E::ExhaustedSearch { .. } | E::SamplingExhausted { .. } => exit::INTERNAL,
                _ => exit::INPUT,
            },
        }
    }
}
