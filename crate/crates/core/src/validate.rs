//! Whole-log validation.
//!
//! The checked constructors in [`crate::model`] refuse to build invalid
//! values, but logs can also be assembled field-by-field or parsed
//! leniently from files that break the rules. [`validate_log`] walks such
//! a log and reports *every* violation with a navigable location instead
//! of stopping at the first.

use std::collections::HashSet;
use std::fmt;

use serde::Serialize;

use crate::model::{
    UncertainActivity, UncertainIndeterminacy, UncertainLog, UncertainTimestamp,
    PROBABILITY_EPSILON,
};

/// Where in the log a violation sits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Location {
    /// Zero-based trace position in the log.
    pub trace_index: usize,
    pub case_id: String,
    /// Zero-based event position within the trace, if event-level.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub event_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub event_id: Option<String>,
    /// Which attribute of the event is at fault, e.g. `activity`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub attribute: Option<&'static str>,
}

impl Location {
    fn trace(trace_index: usize, case_id: &str) -> Self {
        Location {
            trace_index,
            case_id: case_id.to_string(),
            event_index: None,
            event_id: None,
            attribute: None,
        }
    }

    fn event(
        trace_index: usize,
        case_id: &str,
        event_index: usize,
        event_id: &str,
        attribute: &'static str,
    ) -> Self {
        Location {
            trace_index,
            case_id: case_id.to_string(),
            event_index: Some(event_index),
            event_id: Some(event_id.to_string()),
            attribute: Some(attribute),
        }
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "trace[{}]", self.trace_index)?;
        if !self.case_id.is_empty() {
            write!(f, " (case {})", self.case_id)?;
        }
        if let Some(i) = self.event_index {
            write!(f, " event[{i}]")?;
            if let Some(id) = &self.event_id {
                write!(f, " ({id})")?;
            }
        }
        if let Some(attr) = self.attribute {
            write!(f, " {attr}")?;
        }
        Ok(())
    }
}

/// What went wrong.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ViolationKind {
    /// The same event id appears more than once anywhere in the log.
    DuplicateEventId { id: String },
    /// The same case id appears on more than one trace.
    DuplicateCaseId { id: String },
    /// An event's `case_id` differs from its trace's.
    CaseIdMismatch { event_case_id: String },
    EmptyEventId,
    EmptyActivitySet,
    /// Probability mass of a weak map exceeds 1 beyond tolerance.
    ProbabilityMassExceeded { sum: f64 },
    /// A probability outside (0, 1].
    InvalidProbability { value: f64 },
    /// Interval bounds in the wrong order.
    InvertedInterval { min: String, max: String },
    /// Density parameters outside their domain.
    BadDensityParams { message: String },
}

impl fmt::Display for ViolationKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ViolationKind::DuplicateEventId { id } => write!(f, "duplicate event id {id:?}"),
            ViolationKind::DuplicateCaseId { id } => write!(f, "duplicate case id {id:?}"),
            ViolationKind::CaseIdMismatch { event_case_id } => {
                write!(f, "event case id {event_case_id:?} differs from its trace")
            }
            ViolationKind::EmptyEventId => write!(f, "empty event id"),
            ViolationKind::EmptyActivitySet => write!(f, "empty activity candidate set"),
            ViolationKind::ProbabilityMassExceeded { sum } => {
                write!(f, "probability mass {sum} exceeds 1")
            }
            ViolationKind::InvalidProbability { value } => {
                write!(f, "probability {value} outside (0, 1]")
            }
            ViolationKind::InvertedInterval { min, max } => {
                write!(f, "interval bounds inverted: min {min} > max {max}")
            }
            ViolationKind::BadDensityParams { message } => {
                write!(f, "bad density parameters: {message}")
            }
        }
    }
}

/// One finding: a kind plus its location.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Violation {
    pub location: Location,
    #[serde(flatten)]
    pub kind: ViolationKind,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.location, self.kind)
    }
}

/// Everything [`validate_log`] found.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn push(&mut self, location: Location, kind: ViolationKind) {
        self.violations.push(Violation { location, kind });
    }
}

/// Checks every trace and event of a log, reporting all violations.
pub fn validate_log(log: &UncertainLog) -> ValidationReport {
    let mut report = ValidationReport::default();
    let mut case_ids: HashSet<&str> = HashSet::new();
    let mut event_ids: HashSet<&str> = HashSet::new();

    for (ti, trace) in log.traces.iter().enumerate() {
        if !trace.case_id.is_empty() && !case_ids.insert(&trace.case_id) {
            report.push(
                Location::trace(ti, &trace.case_id),
                ViolationKind::DuplicateCaseId {
                    id: trace.case_id.clone(),
                },
            );
        }
        for (ei, event) in trace.events.iter().enumerate() {
            let loc = |attribute| Location::event(ti, &trace.case_id, ei, &event.event_id, attribute);
            if event.event_id.is_empty() {
                report.push(loc("event_id"), ViolationKind::EmptyEventId);
            } else if !event_ids.insert(&event.event_id) {
                report.push(
                    loc("event_id"),
                    ViolationKind::DuplicateEventId {
                        id: event.event_id.clone(),
                    },
                );
            }
            if event.case_id != trace.case_id {
                report.push(
                    loc("case_id"),
                    ViolationKind::CaseIdMismatch {
                        event_case_id: event.case_id.clone(),
                    },
                );
            }
            check_activity(&event.activity, &loc("activity"), &mut report);
            check_timestamp(&event.timestamp, &loc("timestamp"), &mut report);
            if let UncertainIndeterminacy::WeakIndeterminate(p) = event.indeterminacy {
                if !(p > 0.0 && p <= 1.0) {
                    report.push(
                        loc("indeterminacy"),
                        ViolationKind::InvalidProbability { value: p },
                    );
                }
            }
        }
    }
    report
}

fn check_activity(activity: &UncertainActivity, loc: &Location, report: &mut ValidationReport) {
    match activity {
        UncertainActivity::StrongSet(set) => {
            if set.is_empty() {
                report.push(loc.clone(), ViolationKind::EmptyActivitySet);
            }
        }
        UncertainActivity::WeakMap(map) => {
            if map.is_empty() {
                report.push(loc.clone(), ViolationKind::EmptyActivitySet);
                return;
            }
            for &p in map.values() {
                if !(p > 0.0 && p <= 1.0) {
                    report.push(loc.clone(), ViolationKind::InvalidProbability { value: p });
                }
            }
            let sum: f64 = map.values().sum();
            if sum > 1.0 + PROBABILITY_EPSILON {
                report.push(loc.clone(), ViolationKind::ProbabilityMassExceeded { sum });
            }
        }
    }
}

fn check_timestamp(timestamp: &UncertainTimestamp, loc: &Location, report: &mut ValidationReport) {
    match timestamp {
        UncertainTimestamp::Certain(_) => {}
        UncertainTimestamp::StrongInterval { min, max } => {
            if min > max {
                report.push(
                    loc.clone(),
                    ViolationKind::InvertedInterval {
                        min: min.to_iso8601(),
                        max: max.to_iso8601(),
                    },
                );
            }
        }
        UncertainTimestamp::WeakDensity(spec) => {
            if let Err(e) = spec.check() {
                report.push(
                    loc.clone(),
                    ViolationKind::BadDensityParams {
                        message: e.to_string(),
                    },
                );
            }
        }
    }
}
