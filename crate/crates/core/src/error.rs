//! Crate-wide error type.

use thiserror::Error;

/// Result alias used throughout the crate.
pub type Result<T> = std::result::Result<T, Error>;

/// All errors this crate can produce.
///
/// Model invariant breaches surface here when a value is *constructed*;
/// [`crate::validate::validate_log`] reports the same conditions as findings
/// instead of failures when inspecting an already-built log.
#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed XML{}: {message}", position.map(|p| format!(" at byte {p}")).unwrap_or_default())]
    MalformedXml {
        message: String,
        position: Option<u64>,
    },

    #[error("event {context}: no timestamp (neither time:timestamp nor an uncertain timestamp annotation)")]
    MissingTimestamp { context: String },

    #[error("event {context}: no activity (neither concept:name nor an uncertain activity annotation)")]
    MissingActivity { context: String },

    #[error("event {context}: bad uncertainty structure: {message}")]
    BadUncertaintyStructure { context: String, message: String },

    #[error("unknown density function {0:?}")]
    UnknownDensityFunction(String),

    #[error("bad density parameters: {0}")]
    BadDensityParams(String),

    #[error("activity set must not be empty")]
    EmptyActivitySet,

    #[error("activity label must not be empty")]
    EmptyActivityLabel,

    #[error("duplicate activity label {0:?}")]
    DuplicateActivityLabel(String),

    #[error("probability mass {sum} exceeds 1")]
    ProbabilityMassExceeded { sum: f64 },

    #[error("probability {0} outside (0, 1]")]
    InvalidProbability(f64),

    #[error("interval bounds inverted: {min} > {max}")]
    InvertedInterval { min: String, max: String },

    #[error("event id must not be empty")]
    EmptyEventId,

    #[error("trace has {count} events, enumeration cap is {cap}")]
    TooManyEvents { count: usize, cap: usize },

    #[error("trace has a continuous timestamp density; enumeration only supports certain and interval timestamps")]
    ContinuousDensityPresent,

    #[error("trace has strongly uncertain attributes; a mode (uniform or possibilistic) must be chosen")]
    ModeRequired,

    #[error("possibilistic mode cannot weigh a strongly indeterminate event")]
    UnweighableIndeterminacy,

    #[error("weak activity probabilities sum to {sum} < 1 and strict sub-stochastic handling is active")]
    SubStochasticMass { sum: f64 },

    #[error("input log is not certain: {context} carries an uncertain {field}")]
    InputNotCertain { context: String, field: &'static str },

    #[error("k_labels = {k} but the log alphabet has only {alphabet} labels")]
    AlphabetTooSmall { k: usize, alphabet: usize },

    #[error("event id sets differ between the two logs: {0}")]
    IdMismatch(String),

    #[error("directive line {line}: {message}")]
    Directive { line: usize, message: String },

    #[error("directive references unknown event {event_id:?} in case {case_id:?}")]
    UnknownEventRef { case_id: String, event_id: String },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),
}

impl From<quick_xml::Error> for Error {
    fn from(e: quick_xml::Error) -> Self {
        match e {
            quick_xml::Error::Io(io) => Error::Io(std::io::Error::new(io.kind(), io.to_string())),
            other => Error::xml(other.to_string(), None),
        }
    }
}

impl Error {
    pub(crate) fn xml(message: impl Into<String>, position: Option<u64>) -> Self {
        Error::MalformedXml {
            message: message.into(),
            position,
        }
    }

    pub(crate) fn structure(context: impl Into<String>, message: impl Into<String>) -> Self {
        Error::BadUncertaintyStructure {
            context: context.into(),
            message: message.into(),
        }
    }
}
