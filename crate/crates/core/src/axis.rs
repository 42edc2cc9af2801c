//! Conversion between wall-clock timestamps and the real *day axis* that
//! timestamp densities are expressed on.
//!
//! A density such as a Gaussian with mean 7 lives on a per-trace axis
//! measured in days since an epoch. By default the epoch is midnight UTC
//! of the day of the earliest certain timestamp bound appearing in the
//! trace, so day values stay small and readable; the epoch can be
//! overridden when a corpus was authored against a fixed origin.

use chrono::{DateTime, Duration, TimeZone, Utc};

use crate::model::{Timestamp, UncertainTimestamp, UncertainTrace};

/// Milliseconds per day; the day axis is real-valued, so fractional days
/// are meaningful (12:00 UTC is day `n + 0.5`).
pub const MS_PER_DAY: f64 = 86_400_000.0;

/// A fixed origin for expressing instants as fractional days.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TimeAxis {
    epoch: DateTime<Utc>,
}

/// The Unix-epoch axis, used when nothing anchors a trace in time.
impl Default for TimeAxis {
    fn default() -> Self {
        TimeAxis {
            epoch: Utc.timestamp_opt(0, 0).unwrap(),
        }
    }
}

impl TimeAxis {
    /// Axis anchored at an explicit epoch.
    pub fn with_epoch(epoch: DateTime<Utc>) -> Self {
        TimeAxis { epoch }
    }

    /// Axis anchored at midnight UTC of the day `t` falls on.
    pub fn anchored_at(t: Timestamp) -> Self {
        let day = t.instant().with_timezone(&Utc).date_naive();
        let midnight = day.and_hms_opt(0, 0, 0).expect("midnight exists");
        TimeAxis {
            epoch: Utc.from_utc_datetime(&midnight),
        }
    }

    /// Default axis for a trace: midnight UTC of the day of the earliest
    /// certain timestamp bound (interval minima count, densities do not).
    /// Falls back to the Unix epoch when no event has a certain bound.
    pub fn for_trace(trace: &UncertainTrace) -> Self {
        trace
            .events
            .iter()
            .filter_map(|e| e.timestamp.earliest_certain_bound())
            .min()
            .map(TimeAxis::anchored_at)
            .unwrap_or_default()
    }

    pub fn epoch(&self) -> DateTime<Utc> {
        self.epoch
    }

    /// Fractional days since the epoch.
    pub fn to_days(&self, t: Timestamp) -> f64 {
        (t.millis() - self.epoch.timestamp_millis()) as f64 / MS_PER_DAY
    }

    /// Inverse of [`to_days`](Self::to_days), truncated to milliseconds.
    pub fn to_timestamp(&self, days: f64) -> Timestamp {
        let ms = (days * MS_PER_DAY).round() as i64;
        Timestamp::from_utc(self.epoch + Duration::milliseconds(ms))
    }

    /// Interval bounds of an uncertain timestamp on this axis, if it has any.
    pub fn bounds_days(&self, t: &UncertainTimestamp) -> Option<(f64, f64)> {
        t.bounds()
            .map(|(min, max)| (self.to_days(min), self.to_days(max)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        label, utc, Timestamp, UncertainActivity, UncertainEvent, UncertainIndeterminacy,
        UncertainTimestamp, UncertainTrace,
    };

    fn event(id: &str, ts: UncertainTimestamp) -> UncertainEvent {
        UncertainEvent::new(
            id,
            "c",
            UncertainActivity::certain(label("A")),
            ts,
            UncertainIndeterminacy::Determinate,
        )
        .unwrap()
    }

    #[test]
    fn default_epoch_is_midnight_of_earliest_certain_bound() {
        let t1 = Timestamp::from_utc(utc(2011, 7, 5, 12, 0, 0));
        let t0 = Timestamp::from_utc(utc(2011, 7, 4, 18, 30, 0));
        let trace = UncertainTrace::new("c").with_events(vec![
            event("e1", UncertainTimestamp::certain(t1)),
            event(
                "e2",
                UncertainTimestamp::interval(t0, Timestamp::from_utc(utc(2011, 7, 10, 0, 0, 0)))
                    .unwrap(),
            ),
        ]);
        let axis = TimeAxis::for_trace(&trace);
        assert_eq!(axis.epoch(), utc(2011, 7, 4, 0, 0, 0));
        assert!((axis.to_days(t0) - 0.770_833_333).abs() < 1e-6);
        assert!((axis.to_days(t1) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn density_only_trace_falls_back_to_unix_epoch() {
        let trace = UncertainTrace::new("c").with_events(vec![event(
            "e1",
            UncertainTimestamp::density(crate::model::DensitySpec::gaussian(7.0, 1.0).unwrap())
                .unwrap(),
        )]);
        let axis = TimeAxis::for_trace(&trace);
        assert_eq!(axis.epoch(), Utc.timestamp_opt(0, 0).unwrap());
    }

    #[test]
    fn override_epoch_maps_noon_dates_to_whole_days() {
        // with the origin at Jun-30 noon, Jul-d noon lands exactly on day d
        let axis = TimeAxis::with_epoch(utc(2011, 6, 30, 12, 0, 0));
        let jul8 = Timestamp::from_utc(utc(2011, 7, 8, 12, 0, 0));
        assert_eq!(axis.to_days(jul8), 8.0);
        assert_eq!(axis.to_timestamp(8.0), jul8);
    }

    #[test]
    fn round_trip_days() {
        let axis = TimeAxis::with_epoch(utc(2011, 6, 30, 12, 0, 0));
        for days in [0.0, 0.25, 7.503, 42.0, -3.5] {
            let back = axis.to_days(axis.to_timestamp(days));
            assert!((back - days).abs() < 1e-7, "{days} -> {back}");
        }
    }
}
