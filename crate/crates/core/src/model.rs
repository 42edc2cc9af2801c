//! In-memory representation of uncertain attributes, events, traces, and logs.
//!
//! An *uncertain* attribute is either **strongly** uncertain (a set of
//! candidate values or a closed interval, no probabilities) or **weakly**
//! uncertain (a probability mass function or a named density). A certain
//! value embeds as the degenerate case: a one-element set, a zero-width
//! interval, or a determinate event.
//!
//! All values are immutable once built and safe to share across threads.
//! The checked constructors reject invariant breaches; the enum variants
//! themselves stay public so that readers can materialize *invalid* data
//! (an inverted interval, an overweight probability map) for
//! [`crate::validate::validate_log`] to report.

use std::fmt;

use chrono::{DateTime, FixedOffset, Timelike, Utc};
#[cfg(test)]
use chrono::TimeZone;
use indexmap::{IndexMap, IndexSet};

use crate::error::{Error, Result};
use crate::xes::{LogHeader, XesAttribute};

/// Absolute tolerance when checking that probability masses do not exceed 1.
/// Absorbs decimal-text round-trip error.
pub const PROBABILITY_EPSILON: f64 = 1e-9;

/// A concrete activity name. Non-empty; compared by exact text equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ActivityLabel(String);

impl ActivityLabel {
    pub fn new(name: impl Into<String>) -> Result<Self> {
        let name = name.into();
        if name.is_empty() {
            return Err(Error::EmptyActivityLabel);
        }
        Ok(ActivityLabel(name))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for ActivityLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::borrow::Borrow<str> for ActivityLabel {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl TryFrom<&str> for ActivityLabel {
    type Error = Error;

    fn try_from(value: &str) -> Result<Self> {
        ActivityLabel::new(value)
    }
}

/// A millisecond-precision instant carrying its original UTC offset.
///
/// Equality and ordering compare the instant only; the offset is kept so
/// serialization reproduces the source notation.
#[derive(Clone, Copy, Debug)]
pub struct Timestamp(DateTime<FixedOffset>);

impl Timestamp {
    /// Builds a timestamp, truncating sub-millisecond precision.
    pub fn new(instant: DateTime<FixedOffset>) -> Self {
        let ns = instant.nanosecond();
        let truncated = instant
            .with_nanosecond(ns / 1_000_000 * 1_000_000)
            .unwrap_or(instant);
        Timestamp(truncated)
    }

    pub fn from_utc(instant: DateTime<Utc>) -> Self {
        Timestamp::new(instant.fixed_offset())
    }

    /// Parses an ISO-8601 / RFC 3339 date with offset,
    /// e.g. `2011-07-05T12:00:00+00:00`.
    pub fn parse(text: &str) -> Result<Self> {
        let parsed = DateTime::parse_from_rfc3339(text)
            .map_err(|e| Error::xml(format!("bad date {text:?}: {e}"), None))?;
        Ok(Timestamp::new(parsed))
    }

    pub fn instant(&self) -> DateTime<FixedOffset> {
        self.0
    }

    pub fn millis(&self) -> i64 {
        self.0.timestamp_millis()
    }

    /// ISO-8601 text with numeric offset, fractional seconds only when non-zero.
    pub fn to_iso8601(&self) -> String {
        self.0
            .to_rfc3339_opts(chrono::SecondsFormat::AutoSi, false)
    }
}

impl PartialEq for Timestamp {
    fn eq(&self, other: &Self) -> bool {
        self.millis() == other.millis()
    }
}

impl Eq for Timestamp {}

impl PartialOrd for Timestamp {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Timestamp {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.millis().cmp(&other.millis())
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_iso8601())
    }
}

/// The "?" placeholder marking that a recorded event may not have occurred.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct IndeterminacyMark;

impl IndeterminacyMark {
    pub const SYMBOL: &'static str = "?";
}

impl fmt::Display for IndeterminacyMark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(Self::SYMBOL)
    }
}

/// An activity attribute: a candidate set (strong) or a probability map (weak).
#[derive(Clone, Debug, PartialEq)]
pub enum UncertainActivity {
    /// Non-empty set of candidate labels, no probabilities attached.
    StrongSet(IndexSet<ActivityLabel>),
    /// Non-empty map label → probability in (0, 1], masses summing to at most 1.
    WeakMap(IndexMap<ActivityLabel, f64>),
}

impl UncertainActivity {
    /// A certain activity: one-element strong set.
    pub fn certain(label: ActivityLabel) -> Self {
        UncertainActivity::StrongSet(IndexSet::from([label]))
    }

    pub fn strong_set<I: IntoIterator<Item = ActivityLabel>>(labels: I) -> Result<Self> {
        let mut set = IndexSet::new();
        for label in labels {
            if !set.insert(label.clone()) {
                return Err(Error::DuplicateActivityLabel(label.0));
            }
        }
        if set.is_empty() {
            return Err(Error::EmptyActivitySet);
        }
        Ok(UncertainActivity::StrongSet(set))
    }

    pub fn weak_map<I: IntoIterator<Item = (ActivityLabel, f64)>>(entries: I) -> Result<Self> {
        let mut map = IndexMap::new();
        for (label, p) in entries {
            if !(p > 0.0 && p <= 1.0) {
                return Err(Error::InvalidProbability(p));
            }
            if map.insert(label.clone(), p).is_some() {
                return Err(Error::DuplicateActivityLabel(label.0));
            }
        }
        if map.is_empty() {
            return Err(Error::EmptyActivitySet);
        }
        let sum: f64 = map.values().sum();
        if sum > 1.0 + PROBABILITY_EPSILON {
            return Err(Error::ProbabilityMassExceeded { sum });
        }
        Ok(UncertainActivity::WeakMap(map))
    }

    /// Candidate labels in insertion order.
    pub fn labels(&self) -> impl Iterator<Item = &ActivityLabel> {
        match self {
            UncertainActivity::StrongSet(set) => {
                Box::new(set.iter()) as Box<dyn Iterator<Item = &ActivityLabel>>
            }
            UncertainActivity::WeakMap(map) => Box::new(map.keys()),
        }
    }

    pub fn support_size(&self) -> usize {
        match self {
            UncertainActivity::StrongSet(set) => set.len(),
            UncertainActivity::WeakMap(map) => map.len(),
        }
    }

    /// Total probability mass of a weak map; 1 for a strong set.
    pub fn mass(&self) -> f64 {
        match self {
            UncertainActivity::StrongSet(_) => 1.0,
            UncertainActivity::WeakMap(map) => map.values().sum(),
        }
    }

    /// Strongly uncertain: more than one candidate without probabilities.
    pub fn is_strong(&self) -> bool {
        matches!(self, UncertainActivity::StrongSet(set) if set.len() > 1)
    }

    /// Weakly uncertain: a probability map leaving real uncertainty
    /// (more than one entry, or any entry below 1).
    pub fn is_weak(&self) -> bool {
        match self {
            UncertainActivity::StrongSet(_) => false,
            UncertainActivity::WeakMap(map) => map.len() > 1 || map.values().any(|&p| p < 1.0),
        }
    }

    /// The label a plain XES consumer should see: the lexicographically
    /// smallest candidate for a strong set, the most probable entry for a
    /// weak map (ties broken lexicographically).
    pub fn representative(&self) -> &ActivityLabel {
        match self {
            UncertainActivity::StrongSet(set) => set.iter().min().expect("non-empty set"),
            UncertainActivity::WeakMap(map) => {
                map.iter()
                    .min_by(|(la, pa), (lb, pb)| {
                        pb.partial_cmp(pa).unwrap().then_with(|| la.cmp(lb))
                    })
                    .map(|(label, _)| label)
                    .expect("non-empty map")
            }
        }
    }
}

/// Kind tag for a named timestamp density. Serializes as its wire name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum DensityKind {
    Gaussian,
    Uniform,
    Gamma,
}

impl DensityKind {
    /// Wire name, e.g. `GAUSSIAN`.
    pub fn wire_name(&self) -> &'static str {
        match self {
            DensityKind::Gaussian => "GAUSSIAN",
            DensityKind::Uniform => "UNIFORM",
            DensityKind::Gamma => "GAMMA",
        }
    }

    pub fn from_wire_name(name: &str) -> Result<Self> {
        match name {
            "GAUSSIAN" => Ok(DensityKind::Gaussian),
            "UNIFORM" => Ok(DensityKind::Uniform),
            "GAMMA" => Ok(DensityKind::Gamma),
            other => Err(Error::UnknownDensityFunction(other.to_string())),
        }
    }
}

/// A named continuous density over the day axis (days since the log epoch,
/// see [`crate::axis::TimeAxis`]).
#[derive(Clone, Debug, PartialEq)]
pub enum DensitySpec {
    Gaussian { mean: f64, stddev: f64 },
    Uniform { low: f64, high: f64 },
    Gamma { shape: f64, scale: f64 },
}

impl DensitySpec {
    pub fn gaussian(mean: f64, stddev: f64) -> Result<Self> {
        let spec = DensitySpec::Gaussian { mean, stddev };
        spec.check()?;
        Ok(spec)
    }

    pub fn uniform(low: f64, high: f64) -> Result<Self> {
        let spec = DensitySpec::Uniform { low, high };
        spec.check()?;
        Ok(spec)
    }

    pub fn gamma(shape: f64, scale: f64) -> Result<Self> {
        let spec = DensitySpec::Gamma { shape, scale };
        spec.check()?;
        Ok(spec)
    }

    pub fn check(&self) -> Result<()> {
        let finite = |v: f64, name: &str| {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::BadDensityParams(format!("{name} must be finite, got {v}")))
            }
        };
        match *self {
            DensitySpec::Gaussian { mean, stddev } => {
                finite(mean, "parameter_mean")?;
                finite(stddev, "parameter_stddev")?;
                if stddev <= 0.0 {
                    return Err(Error::BadDensityParams(format!(
                        "parameter_stddev must be > 0, got {stddev}"
                    )));
                }
            }
            DensitySpec::Uniform { low, high } => {
                finite(low, "parameter_low")?;
                finite(high, "parameter_high")?;
                if low >= high {
                    return Err(Error::BadDensityParams(format!(
                        "parameter_low must be < parameter_high, got [{low}, {high}]"
                    )));
                }
            }
            DensitySpec::Gamma { shape, scale } => {
                finite(shape, "parameter_shape")?;
                finite(scale, "parameter_scale")?;
                if shape <= 0.0 || scale <= 0.0 {
                    return Err(Error::BadDensityParams(format!(
                        "parameter_shape and parameter_scale must be > 0, got ({shape}, {scale})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> DensityKind {
        match self {
            DensitySpec::Gaussian { .. } => DensityKind::Gaussian,
            DensitySpec::Uniform { .. } => DensityKind::Uniform,
            DensitySpec::Gamma { .. } => DensityKind::Gamma,
        }
    }

    /// Ordered wire parameters, e.g. `[("parameter_mean", 7.0), ("parameter_stddev", 1.0)]`.
    pub fn params(&self) -> [(&'static str, f64); 2] {
        match *self {
            DensitySpec::Gaussian { mean, stddev } => {
                [("parameter_mean", mean), ("parameter_stddev", stddev)]
            }
            DensitySpec::Uniform { low, high } => {
                [("parameter_low", low), ("parameter_high", high)]
            }
            DensitySpec::Gamma { shape, scale } => {
                [("parameter_shape", shape), ("parameter_scale", scale)]
            }
        }
    }

    /// Rebuilds a spec from its wire form, enforcing exact parameter names
    /// and order.
    pub fn from_wire(name: &str, params: &[(String, f64)]) -> Result<Self> {
        let kind = DensityKind::from_wire_name(name)?;
        let expected: [&str; 2] = match kind {
            DensityKind::Gaussian => ["parameter_mean", "parameter_stddev"],
            DensityKind::Uniform => ["parameter_low", "parameter_high"],
            DensityKind::Gamma => ["parameter_shape", "parameter_scale"],
        };
        if params.len() != 2 {
            return Err(Error::BadDensityParams(format!(
                "{name} expects exactly {expected:?}, got {} parameters",
                params.len()
            )));
        }
        for ((got, _), want) in params.iter().zip(expected) {
            if got != want {
                return Err(Error::BadDensityParams(format!(
                    "{name} expects parameters {expected:?}, got {got:?}"
                )));
            }
        }
        let (a, b) = (params[0].1, params[1].1);
        match kind {
            DensityKind::Gaussian => DensitySpec::gaussian(a, b),
            DensityKind::Uniform => DensitySpec::uniform(a, b),
            DensityKind::Gamma => DensitySpec::gamma(a, b),
        }
    }

    /// Mean of the density on the day axis.
    pub fn mean(&self) -> f64 {
        match *self {
            DensitySpec::Gaussian { mean, .. } => mean,
            DensitySpec::Uniform { low, high } => (low + high) / 2.0,
            DensitySpec::Gamma { shape, scale } => shape * scale,
        }
    }
}

/// A timestamp attribute: a point, a closed interval, or a density.
#[derive(Clone, Debug)]
pub enum UncertainTimestamp {
    Certain(Timestamp),
    /// Closed interval `[min, max]`. The checked constructor collapses
    /// `[t, t]` to `Certain(t)` and rejects inverted bounds.
    StrongInterval { min: Timestamp, max: Timestamp },
    WeakDensity(DensitySpec),
}

impl UncertainTimestamp {
    pub fn certain(t: Timestamp) -> Self {
        UncertainTimestamp::Certain(t)
    }

    pub fn interval(min: Timestamp, max: Timestamp) -> Result<Self> {
        if min > max {
            return Err(Error::InvertedInterval {
                min: min.to_iso8601(),
                max: max.to_iso8601(),
            });
        }
        if min == max {
            Ok(UncertainTimestamp::Certain(min))
        } else {
            Ok(UncertainTimestamp::StrongInterval { min, max })
        }
    }

    pub fn density(spec: DensitySpec) -> Result<Self> {
        spec.check()?;
        Ok(UncertainTimestamp::WeakDensity(spec))
    }

    /// Interval bounds; a certain timestamp is its own zero-width interval.
    /// `None` for densities.
    pub fn bounds(&self) -> Option<(Timestamp, Timestamp)> {
        match self {
            UncertainTimestamp::Certain(t) => Some((*t, *t)),
            UncertainTimestamp::StrongInterval { min, max } => Some((*min, *max)),
            UncertainTimestamp::WeakDensity(_) => None,
        }
    }

    /// Strongly uncertain: a widthful interval.
    pub fn is_strong(&self) -> bool {
        matches!(self, UncertainTimestamp::StrongInterval { min, max } if min < max)
    }

    /// Weakly uncertain: a density.
    pub fn is_weak(&self) -> bool {
        matches!(self, UncertainTimestamp::WeakDensity(_))
    }

    /// Earliest bound that is a certain instant (used for the epoch rule).
    pub fn earliest_certain_bound(&self) -> Option<Timestamp> {
        self.bounds().map(|(min, _)| min)
    }
}

impl PartialEq for UncertainTimestamp {
    fn eq(&self, other: &Self) -> bool {
        match (self.bounds(), other.bounds()) {
            (Some(a), Some(b)) => a == b,
            (None, None) => match (self, other) {
                (UncertainTimestamp::WeakDensity(a), UncertainTimestamp::WeakDensity(b)) => a == b,
                _ => unreachable!(),
            },
            _ => false,
        }
    }
}

/// Whether a recorded event actually happened.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum UncertainIndeterminacy {
    /// The event certainly occurred.
    Determinate,
    /// The event may not have occurred; no probability known.
    StrongIndeterminate,
    /// The event did not occur with the given probability in (0, 1].
    WeakIndeterminate(f64),
}

impl UncertainIndeterminacy {
    pub fn weak(p_not_occurred: f64) -> Result<Self> {
        if !(p_not_occurred > 0.0 && p_not_occurred <= 1.0) {
            return Err(Error::InvalidProbability(p_not_occurred));
        }
        Ok(UncertainIndeterminacy::WeakIndeterminate(p_not_occurred))
    }

    pub fn is_strong(&self) -> bool {
        matches!(self, UncertainIndeterminacy::StrongIndeterminate)
    }

    pub fn is_weak(&self) -> bool {
        matches!(self, UncertainIndeterminacy::WeakIndeterminate(_))
    }

    /// `true` when the event is only *possibly* real.
    pub fn is_indeterminate(&self) -> bool {
        !matches!(self, UncertainIndeterminacy::Determinate)
    }
}

/// One recorded step of a case, each attribute possibly uncertain.
#[derive(Clone, Debug, PartialEq)]
pub struct UncertainEvent {
    /// Unique identifier within the log.
    pub event_id: String,
    /// Case this event belongs to; matches the owning trace.
    pub case_id: String,
    pub activity: UncertainActivity,
    pub timestamp: UncertainTimestamp,
    pub indeterminacy: UncertainIndeterminacy,
    /// Attributes we do not interpret, preserved in document order.
    pub extra: Vec<XesAttribute>,
}

impl UncertainEvent {
    /// Checked constructor: verifies every component invariant and
    /// canonicalizes degenerate intervals.
    pub fn new(
        event_id: impl Into<String>,
        case_id: impl Into<String>,
        activity: UncertainActivity,
        timestamp: UncertainTimestamp,
        indeterminacy: UncertainIndeterminacy,
    ) -> Result<Self> {
        let event_id = event_id.into();
        if event_id.is_empty() {
            return Err(Error::EmptyEventId);
        }
        check_activity(&activity)?;
        let timestamp = match timestamp {
            UncertainTimestamp::StrongInterval { min, max } => {
                UncertainTimestamp::interval(min, max)?
            }
            UncertainTimestamp::WeakDensity(spec) => UncertainTimestamp::density(spec)?,
            certain => certain,
        };
        if let UncertainIndeterminacy::WeakIndeterminate(p) = indeterminacy {
            UncertainIndeterminacy::weak(p)?;
        }
        Ok(UncertainEvent {
            event_id,
            case_id: case_id.into(),
            activity,
            timestamp,
            indeterminacy,
            extra: Vec::new(),
        })
    }

    pub fn with_extra(mut self, extra: Vec<XesAttribute>) -> Self {
        self.extra = extra;
        self
    }

    /// Any attribute strongly uncertain: a multi-label set, a widthful
    /// interval, or a bare "?" mark.
    pub fn is_strongly_uncertain(&self) -> bool {
        self.activity.is_strong() || self.timestamp.is_strong() || self.indeterminacy.is_strong()
    }

    /// Any attribute weakly uncertain: a probability map with real
    /// uncertainty, a density, or a quantified "?" mark.
    pub fn is_weakly_uncertain(&self) -> bool {
        self.activity.is_weak() || self.timestamp.is_weak() || self.indeterminacy.is_weak()
    }
}

fn check_activity(activity: &UncertainActivity) -> Result<()> {
    match activity {
        UncertainActivity::StrongSet(set) => {
            if set.is_empty() {
                return Err(Error::EmptyActivitySet);
            }
        }
        UncertainActivity::WeakMap(map) => {
            if map.is_empty() {
                return Err(Error::EmptyActivitySet);
            }
            for &p in map.values() {
                if !(p > 0.0 && p <= 1.0) {
                    return Err(Error::InvalidProbability(p));
                }
            }
            let sum: f64 = map.values().sum();
            if sum > 1.0 + PROBABILITY_EPSILON {
                return Err(Error::ProbabilityMassExceeded { sum });
            }
        }
    }
    Ok(())
}

/// The ordered record of one case.
///
/// Event order carries no semantics (realization order comes from
/// timestamps alone); it is preserved for document fidelity.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct UncertainTrace {
    pub case_id: String,
    pub events: Vec<UncertainEvent>,
    /// Trace-level passthrough attributes (excluding `concept:name`,
    /// which is the case id).
    pub attributes: Vec<XesAttribute>,
}

impl UncertainTrace {
    pub fn new(case_id: impl Into<String>) -> Self {
        UncertainTrace {
            case_id: case_id.into(),
            events: Vec::new(),
            attributes: Vec::new(),
        }
    }

    pub fn with_events(mut self, events: Vec<UncertainEvent>) -> Self {
        self.events = events;
        self
    }

    pub fn push(&mut self, event: UncertainEvent) {
        self.events.push(event);
    }
}

/// An ordered collection of traces plus the XES envelope that carried them.
#[derive(Clone, Debug, PartialEq)]
pub struct UncertainLog {
    pub header: LogHeader,
    /// Log-level passthrough attributes.
    pub attributes: Vec<XesAttribute>,
    pub traces: Vec<UncertainTrace>,
}

impl UncertainLog {
    pub fn new() -> Self {
        UncertainLog {
            header: LogHeader::default(),
            attributes: Vec::new(),
            traces: Vec::new(),
        }
    }

    pub fn with_traces(mut self, traces: Vec<UncertainTrace>) -> Self {
        self.traces = traces;
        self
    }

    pub fn events(&self) -> impl Iterator<Item = &UncertainEvent> {
        self.traces.iter().flat_map(|t| t.events.iter())
    }

    pub fn event_count(&self) -> usize {
        self.traces.iter().map(|t| t.events.len()).sum()
    }

    /// All distinct activity labels observed anywhere in the log, sorted.
    pub fn alphabet(&self) -> Vec<ActivityLabel> {
        let mut labels: Vec<ActivityLabel> = self
            .events()
            .flat_map(|e| e.activity.labels().cloned())
            .collect();
        labels.sort();
        labels.dedup();
        labels
    }
}

impl Default for UncertainLog {
    fn default() -> Self {
        UncertainLog::new()
    }
}

/// Convenience for building timestamps in tests and small programs.
pub fn ts(text: &str) -> Timestamp {
    Timestamp::parse(text).expect("valid ISO-8601 timestamp")
}

/// Convenience for building labels in tests and small programs.
pub fn label(text: &str) -> ActivityLabel {
    ActivityLabel::new(text).expect("non-empty label")
}

#[cfg(test)]
pub(crate) fn utc(y: i32, mo: u32, d: u32, h: u32, mi: u32, s: u32) -> DateTime<Utc> {
    Utc.with_ymd_and_hms(y, mo, d, h, mi, s).unwrap()
}
