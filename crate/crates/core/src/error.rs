use std::path::PathBuf;

use thiserror::Error;

/// Errors produced while loading, analysing or writing roll-call data.
#[derive(Debug, Error)]
pub enum Error {
    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("CSV error: {0}")]
    Csv(#[from] csv::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("line {line}: {message}")]
    Row { line: u64, message: String },

    #[error("missing column `{column}` in {source_name}")]
    MissingColumn { column: String, source_name: String },

    #[error("duplicate cast for legislator `{legislator}` on rollcall `{rollcall}` (lines {first_line} and {second_line})")]
    DuplicateCast {
        legislator: String,
        rollcall: String,
        first_line: u64,
        second_line: u64,
    },

    #[error("rollcall `{rollcall}` has unparseable date `{value}`")]
    InvalidDate { rollcall: String, value: String },

    #[error("rollcall `{rollcall}` dated {date} falls outside every period range")]
    OutsideRanges { rollcall: String, date: String },

    #[error("unknown legislator `{0}`")]
    UnknownLegislator(String),

    #[error("legislator `{0}` participates but has no LEFT/RIGHT group")]
    MissingGroup(String),

    #[error("cannot bipartition {0} legislator(s); at least 2 are required")]
    CannotBipartition(usize),

    #[error("vectors have different lengths ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("insufficient aggregation cells: {found} matched, at least 3 required")]
    InsufficientCells { found: usize },

    #[error("invalid synthetic configuration: {0}")]
    Synth(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("period {period}: {source}")]
    Period {
        period: String,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn row(line: u64, message: impl Into<String>) -> Self {
        Error::Row {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn in_period(self, period: &str) -> Self {
        Error::Period {
            period: period.to_string(),
            source: Box::new(self),
        }
    }

    /// True when the error stems from invalid configuration rather than bad data.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Config(_) | Error::Synth(_) | Error::UnknownLegislator(_) => true,
            Error::Period { source, .. } => source.is_config(),
            _ => false,
        }
    }

    /// Process exit code: 1 for data errors, 2 for configuration errors.
    pub fn exit_code(&self) -> i32 {
        if self.is_config() {
            2
        } else {
            1
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
