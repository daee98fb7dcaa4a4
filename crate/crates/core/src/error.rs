use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("DimensionMismatch: {what}: expected {expected}, got {actual}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("NonFiniteValue: variable {variable}, period {period} is {value}")]
    NonFiniteValue {
        variable: usize,
        period: usize,
        value: f64,
    },

    #[error("InvalidAxis: {0}")]
    InvalidAxis(String),

    #[error("InvalidLabels: {0}")]
    InvalidLabels(String),

    #[error("WindowOutOfRange: period {t} with window {k} needs history before period 1 (t_max = {t_max})")]
    WindowOutOfRange { t: usize, k: usize, t_max: usize },

    #[error("BadWindow: {0}")]
    BadWindow(String),

    #[error("SeriesTooShort: {0}")]
    SeriesTooShort(String),

    #[error("ConfigMismatch: {0}")]
    ConfigMismatch(String),

    #[error("NegativeIndicator: value {value} at position {index}")]
    NegativeIndicator { index: usize, value: f64 },

    #[error("DuplicateId: competency id {0} appears more than once")]
    DuplicateId(u32),

    #[error("GapInIds: expected id {expected}, found {found}")]
    GapInIds { expected: u32, found: u32 },

    #[error("NonBinaryEntry: line {line}, column {column}: {token:?} is not 0 or 1")]
    NonBinaryEntry {
        line: u64,
        column: usize,
        token: String,
    },

    #[error("NonMonotonicTime: line {line}: period {found} follows {previous}")]
    NonMonotonicTime {
        line: u64,
        previous: u64,
        found: u64,
    },

    #[error("RaggedRow: line {line}: expected {expected} fields, found {found}")]
    RaggedRow {
        line: u64,
        expected: usize,
        found: usize,
    },

    #[error("ParseError: line {line}: {message}")]
    Parse { line: u64, message: String },

    #[error("InvalidBudget: {0}")]
    InvalidBudget(String),

    #[error("InvalidScenario: {0}")]
    InvalidScenario(String),

    #[error("IoError: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: u64, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
