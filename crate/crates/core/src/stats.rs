//! Descriptive statistics over the uncertainty annotations of a log.

use std::fmt;

use serde::Serialize;

use crate::model::{UncertainLog, UncertainTimestamp};

/// Min/max/mean of activity support sizes (1 for a certain event).
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SupportStats {
    pub min: usize,
    pub max: usize,
    pub mean: f64,
}

/// Distribution of strong-interval widths, in fractional days.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct WidthStats {
    pub count: usize,
    pub min_days: f64,
    pub max_days: f64,
    pub mean_days: f64,
}

/// What [`uncertainty_stats`] reports. All counts are event counts; one
/// event can contribute to several flavors at once.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct StatsSummary {
    pub traces: usize,
    pub events: usize,
    /// Events with any uncertain annotation at all.
    pub uncertain_events: usize,
    /// Activity recorded as a multi-label set.
    pub strong_activity: usize,
    /// Activity recorded as a probability map with real uncertainty.
    pub weak_activity: usize,
    /// Timestamp recorded as a widthful interval.
    pub strong_timestamp: usize,
    /// Timestamp recorded as a density.
    pub weak_timestamp: usize,
    /// Unquantified "may not have happened" marks.
    pub strong_indeterminacy: usize,
    /// Quantified "did not happen with probability p" marks.
    pub weak_indeterminacy: usize,
    pub activity_support: SupportStats,
    pub interval_width: WidthStats,
}

/// Walks a log and tallies its uncertainty annotations.
pub fn uncertainty_stats(log: &UncertainLog) -> StatsSummary {
    let mut summary = StatsSummary {
        traces: log.traces.len(),
        ..StatsSummary::default()
    };
    let mut support_sum = 0usize;
    let mut width_sum = 0.0f64;

    for event in log.events() {
        summary.events += 1;
        if event.is_strongly_uncertain() || event.is_weakly_uncertain() {
            summary.uncertain_events += 1;
        }
        if event.activity.is_strong() {
            summary.strong_activity += 1;
        }
        if event.activity.is_weak() {
            summary.weak_activity += 1;
        }
        if event.timestamp.is_strong() {
            summary.strong_timestamp += 1;
        }
        if event.timestamp.is_weak() {
            summary.weak_timestamp += 1;
        }
        if event.indeterminacy.is_strong() {
            summary.strong_indeterminacy += 1;
        }
        if event.indeterminacy.is_weak() {
            summary.weak_indeterminacy += 1;
        }

        let support = event.activity.support_size();
        support_sum += support;
        if summary.events == 1 {
            summary.activity_support.min = support;
            summary.activity_support.max = support;
        } else {
            summary.activity_support.min = summary.activity_support.min.min(support);
            summary.activity_support.max = summary.activity_support.max.max(support);
        }

        if let UncertainTimestamp::StrongInterval { min, max } = &event.timestamp {
            let width = (max.millis() - min.millis()).abs() as f64 / crate::axis::MS_PER_DAY;
            let w = &mut summary.interval_width;
            if w.count == 0 {
                w.min_days = width;
                w.max_days = width;
            } else {
                w.min_days = w.min_days.min(width);
                w.max_days = w.max_days.max(width);
            }
            w.count += 1;
            width_sum += width;
        }
    }

    if summary.events > 0 {
        summary.activity_support.mean = support_sum as f64 / summary.events as f64;
    }
    if summary.interval_width.count > 0 {
        summary.interval_width.mean_days = width_sum / summary.interval_width.count as f64;
    }
    summary
}

impl fmt::Display for StatsSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "traces:               {}", self.traces)?;
        writeln!(f, "events:               {}", self.events)?;
        writeln!(f, "uncertain events:     {}", self.uncertain_events)?;
        writeln!(
            f,
            "activity:             {} strong, {} weak",
            self.strong_activity, self.weak_activity
        )?;
        writeln!(
            f,
            "timestamp:            {} strong, {} weak",
            self.strong_timestamp, self.weak_timestamp
        )?;
        writeln!(
            f,
            "indeterminacy:        {} strong, {} weak",
            self.strong_indeterminacy, self.weak_indeterminacy
        )?;
        writeln!(
            f,
            "activity support:     min {} / max {} / mean {:.3}",
            self.activity_support.min, self.activity_support.max, self.activity_support.mean
        )?;
        write!(
            f,
            "interval width (d):   {} intervals, min {:.3} / max {:.3} / mean {:.3}",
            self.interval_width.count,
            self.interval_width.min_days,
            self.interval_width.max_days,
            self.interval_width.mean_days
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        label, ts, DensitySpec, UncertainActivity, UncertainEvent, UncertainIndeterminacy,
        UncertainTrace,
    };

    fn certain(id: &str) -> UncertainEvent {
        UncertainEvent::new(
            id,
            "c",
            UncertainActivity::certain(label("A")),
            UncertainTimestamp::certain(ts("2011-07-05T12:00:00+00:00")),
            UncertainIndeterminacy::Determinate,
        )
        .unwrap()
    }

    #[test]
    fn empty_log_all_zero() {
        assert_eq!(uncertainty_stats(&UncertainLog::new()), StatsSummary::default());
    }

    #[test]
    fn strong_trace_counts() {
        // one indeterminate event, one two-label event, one interval event
        let mut e1 = certain("e1");
        e1.indeterminacy = UncertainIndeterminacy::StrongIndeterminate;
        let mut e2 = certain("e2");
        e2.activity = UncertainActivity::strong_set([label("PrTP"), label("SecTP")]).unwrap();
        let mut e3 = certain("e3");
        e3.timestamp = UncertainTimestamp::interval(
            ts("2011-07-04T12:00:00+00:00"),
            ts("2011-07-10T12:00:00+00:00"),
        )
        .unwrap();
        let log = UncertainLog::new()
            .with_traces(vec![UncertainTrace::new("c").with_events(vec![e1, e2, e3])]);
        let s = uncertainty_stats(&log);
        assert_eq!(s.events, 3);
        assert_eq!(s.uncertain_events, 3);
        assert_eq!(s.strong_activity, 1);
        assert_eq!(s.strong_timestamp, 1);
        assert_eq!(s.strong_indeterminacy, 1);
        assert_eq!(s.weak_activity + s.weak_timestamp + s.weak_indeterminacy, 0);
        assert_eq!(s.activity_support.min, 1);
        assert_eq!(s.activity_support.max, 2);
        assert!((s.activity_support.mean - 4.0 / 3.0).abs() < 1e-12);
        assert_eq!(s.interval_width.count, 1);
        assert!((s.interval_width.mean_days - 6.0).abs() < 1e-12);
    }

    #[test]
    fn weak_trace_counts() {
        let mut e4 = certain("e4");
        e4.indeterminacy = UncertainIndeterminacy::weak(0.25).unwrap();
        let mut e5 = certain("e5");
        e5.activity =
            UncertainActivity::weak_map([(label("PrTP"), 0.9), (label("SecTP"), 0.1)]).unwrap();
        let mut e6 = certain("e6");
        e6.timestamp =
            UncertainTimestamp::density(DensitySpec::gaussian(7.0, 1.0).unwrap()).unwrap();
        let log = UncertainLog::new()
            .with_traces(vec![UncertainTrace::new("c").with_events(vec![e4, e5, e6])]);
        let s = uncertainty_stats(&log);
        assert_eq!(s.events, 3);
        assert_eq!(s.weak_activity, 1);
        assert_eq!(s.weak_timestamp, 1);
        assert_eq!(s.weak_indeterminacy, 1);
        assert_eq!(s.strong_activity + s.strong_timestamp + s.strong_indeterminacy, 0);
    }
}
