use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed XES at line {line}: {message}")]
    Xes { line: usize, message: String },

    #[error("trace {trace_index}: event {event_index} has no concept:name attribute")]
    MissingConceptName {
        trace_index: usize,
        event_index: usize,
    },

    #[error("empty trace (trace {trace_index} has no events)")]
    EmptyTrace { trace_index: usize },

    #[error("CSV configuration: {0}")]
    CsvConfig(String),

    #[error("CSV row {row}: cannot parse order key {value:?}")]
    CsvOrderKey { row: usize, value: String },

    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),

    #[error("empty alphabet")]
    EmptyAlphabet,

    #[error("threshold out of range: {name} = {value} (expected {expected})")]
    ThresholdOutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown template {name:?}; valid templates are: {valid}")]
    UnknownTemplate { name: String, valid: String },

    #[error("template {template} expects {expected} parameter(s), got {got}")]
    ArityMismatch {
        template: String,
        expected: usize,
        got: usize,
    },

    #[error("binary rule {template} needs two distinct activities, got {activity:?} twice")]
    SelfRule { template: String, activity: String },

    #[error("specification file: {0}")]
    SpecJson(#[from] serde_json::Error),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("pool of {size} traces exceeds the exact enumeration limit of {limit}")]
    PoolTooLarge { size: usize, limit: usize },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit status the command-line tool reports for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ThresholdOutOfRange { .. }
            | Error::InvalidParameter(_)
            | Error::CsvConfig(_) => 2,
            Error::Degenerate(_) | Error::EmptyAlphabet => 3,
            _ => 1,
        }
    }
}

pub(crate) fn check_unit(name: &'static str, value: f64) -> Result<()> {
    if (0.0..=1.0).contains(&value) {
        Ok(())
    } else {
        Err(Error::ThresholdOutOfRange {
            name,
            value,
            expected: "[0, 1]",
        })
    }
}
