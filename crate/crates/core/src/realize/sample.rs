//! Random concrete realizations of uncertain traces.
//!
//! Where [`enumerate_realizations`](super::enumerate_realizations) lists
//! abstract shapes, sampling draws fully concrete worlds: every included
//! event gets one label and one real-valued time on the day axis, and
//! the steps are sorted into the order those times imply. Draws are
//! reproducible: a trace's stream is derived from the seed and its case
//! id, so per-trace results do not depend on the rest of the log and
//! log-level sampling can run in parallel without changing output.
//!
//! Per draw, independently:
//! * each indeterminate event is kept with its occurrence probability
//!   (weak) or a fifty-fifty coin (strong, uniform mode);
//! * each kept event's label is drawn from its probability map
//!   (sub-stochastic masses renormalized) or uniformly from its
//!   candidate set;
//! * each kept event's time is its point, a uniform draw over its
//!   interval, or a draw from its density;
//! * steps are sorted by `(time, event_id)`.

use std::io::Write;

use chrono::{DateTime, Utc};
use rand::Rng;
use rayon::prelude::*;

use crate::axis::TimeAxis;
use crate::error::{Error, Result};
use crate::model::{
    ActivityLabel, UncertainActivity, UncertainEvent, UncertainIndeterminacy, UncertainLog,
    UncertainTimestamp, UncertainTrace, PROBABILITY_EPSILON,
};
use crate::rng::trace_stream;
use crate::xes::attr::LogHeader;

use super::order::TimeModel;
use super::{effective_mode, Mode, SubStochasticPolicy};

/// One step of a concrete realization.
#[derive(Clone, Debug, PartialEq)]
pub struct RealizationStep {
    pub event_id: String,
    pub activity: ActivityLabel,
    /// Time on the day axis of the source trace.
    pub time_days: f64,
}

/// A fully concrete realization of one trace.
#[derive(Clone, Debug, PartialEq)]
pub struct Realization {
    /// Case id of the source trace.
    pub case_id: String,
    /// Steps in chronological order (ties broken by event id).
    pub steps: Vec<RealizationStep>,
    /// Optional probability weight; sampling leaves it unset.
    pub weight: Option<f64>,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct SampleOptions {
    /// Weighing mode; required once the trace has strong uncertainty.
    /// Sampling draws uniformly over strong supports either way, but
    /// possibilistic mode refuses strong indeterminacy, which admits no
    /// occurrence probability.
    pub mode: Option<Mode>,
    /// Override for the day-axis epoch; defaults to each trace's own.
    pub epoch: Option<DateTime<Utc>>,
    pub substochastic: SubStochasticPolicy,
}

/// Draws `n` concrete realizations of the trace. Reproducible: the same
/// trace, seed, count and options give the same result.
pub fn sample_realizations(
    trace: &UncertainTrace,
    n: u64,
    seed: u64,
    options: &SampleOptions,
) -> Result<Vec<Realization>> {
    if n == 0 {
        return Err(Error::InvalidConfig("sample count must be at least 1".into()));
    }
    let mode = effective_mode(trace, options.mode)?;
    if mode == Mode::Possibilistic
        && trace
            .events
            .iter()
            .any(|e| e.indeterminacy == UncertainIndeterminacy::StrongIndeterminate)
    {
        return Err(Error::UnweighableIndeterminacy);
    }
    if options.substochastic == SubStochasticPolicy::Error {
        for event in &trace.events {
            let mass = event.activity.mass();
            if mass < 1.0 - PROBABILITY_EPSILON {
                return Err(Error::SubStochasticMass { sum: mass });
            }
        }
    }

    let axis = options
        .epoch
        .map(TimeAxis::with_epoch)
        .unwrap_or_else(|| TimeAxis::for_trace(trace));
    let models: Vec<TimeModel> = trace
        .events
        .iter()
        .map(|e| TimeModel::from_timestamp(&e.timestamp, &axis))
        .collect();

    let mut rng = trace_stream(seed, &trace.case_id);
    let mut out = Vec::with_capacity(n as usize);
    for _ in 0..n {
        let mut steps = Vec::with_capacity(trace.events.len());
        for (event, model) in trace.events.iter().zip(&models) {
            if !draw_included(event, &mut rng) {
                continue;
            }
            steps.push(RealizationStep {
                event_id: event.event_id.clone(),
                activity: draw_label(&event.activity, &mut rng).clone(),
                time_days: model.sample(&mut rng),
            });
        }
        steps.sort_by(|a, b| {
            a.time_days
                .total_cmp(&b.time_days)
                .then_with(|| a.event_id.cmp(&b.event_id))
        });
        out.push(Realization {
            case_id: trace.case_id.clone(),
            steps,
            weight: None,
        });
    }
    Ok(out)
}

fn draw_included<R: Rng>(event: &UncertainEvent, rng: &mut R) -> bool {
    match event.indeterminacy {
        UncertainIndeterminacy::Determinate => true,
        UncertainIndeterminacy::StrongIndeterminate => rng.gen_bool(0.5),
        UncertainIndeterminacy::WeakIndeterminate(p_not) => {
            rng.gen_bool((1.0 - p_not).clamp(0.0, 1.0))
        }
    }
}

fn draw_label<'a, R: Rng>(activity: &'a UncertainActivity, rng: &mut R) -> &'a ActivityLabel {
    match activity {
        UncertainActivity::StrongSet(set) => {
            if set.len() == 1 {
                return &set[0];
            }
            &set[rng.gen_range(0..set.len())]
        }
        UncertainActivity::WeakMap(map) => {
            if map.len() == 1 {
                return map.keys().next().expect("non-empty map");
            }
            // weighted draw over the (possibly sub-stochastic) masses
            let total: f64 = map.values().sum();
            let mut u = rng.gen::<f64>() * total;
            for (l, &p) in map {
                u -= p;
                if u <= 0.0 {
                    return l;
                }
            }
            map.keys().next_back().expect("non-empty map")
        }
    }
}

/// Converts a concrete realization back into a plain, certain trace.
/// With `tag` set, case and event ids get a `#tag` suffix so many
/// realizations of one trace can coexist in a single log.
pub fn realization_to_trace(
    realization: &Realization,
    axis: &TimeAxis,
    tag: Option<u64>,
) -> UncertainTrace {
    let suffix = tag.map(|k| format!("#{k}")).unwrap_or_default();
    UncertainTrace {
        case_id: format!("{}{}", realization.case_id, suffix),
        events: realization
            .steps
            .iter()
            .map(|step| {
                UncertainEvent::new(
                    format!("{}{}", step.event_id, suffix),
                    format!("{}{}", realization.case_id, suffix),
                    UncertainActivity::certain(step.activity.clone()),
                    UncertainTimestamp::Certain(axis.to_timestamp(step.time_days)),
                    UncertainIndeterminacy::Determinate,
                )
                .expect("realization steps form valid events")
            })
            .collect(),
        attributes: Vec::new(),
    }
}

/// Samples every trace of the log and returns a plain log of the
/// concrete realizations, `n` per input trace, in input order. Traces
/// are processed in parallel; output is nonetheless deterministic
/// because each trace has its own seed-derived stream.
pub fn sample_log(
    log: &UncertainLog,
    n: u64,
    seed: u64,
    options: &SampleOptions,
) -> Result<UncertainLog> {
    let sampled: Vec<Vec<UncertainTrace>> = log
        .traces
        .par_iter()
        .map(|trace| {
            let realizations = sample_realizations(trace, n, seed, options)?;
            let axis = options
                .epoch
                .map(TimeAxis::with_epoch)
                .unwrap_or_else(|| TimeAxis::for_trace(trace));
            Ok(realizations
                .iter()
                .enumerate()
                .map(|(k, r)| realization_to_trace(r, &axis, Some(k as u64 + 1)))
                .collect())
        })
        .collect::<Result<_>>()?;
    Ok(UncertainLog {
        header: LogHeader::default(),
        attributes: Vec::new(),
        traces: sampled.into_iter().flatten().collect(),
    })
}

/// CSV header for [`append_csv`].
pub const CSV_HEADER: [&str; 6] = [
    "case_id",
    "step_index",
    "event_id",
    "activity",
    "timestamp",
    "weight",
];

/// Appends one row per step: case id, 1-based step index, event id,
/// label, wall-clock timestamp resolved through `axis`, and the weight
/// (empty when unset). With `tag`, ids get the same `#tag` suffix as
/// [`realization_to_trace`].
pub fn append_csv<W: Write>(
    writer: &mut csv::Writer<W>,
    realization: &Realization,
    axis: &TimeAxis,
    tag: Option<u64>,
) -> Result<()> {
    let suffix = tag.map(|k| format!("#{k}")).unwrap_or_default();
    for (i, step) in realization.steps.iter().enumerate() {
        writer.write_record([
            format!("{}{}", realization.case_id, suffix),
            (i + 1).to_string(),
            format!("{}{}", step.event_id, suffix),
            step.activity.as_str().to_string(),
            axis.to_timestamp(step.time_days).to_iso8601(),
            realization.weight.map(|w| w.to_string()).unwrap_or_default(),
        ])?;
    }
    Ok(())
}

/// Writes a whole sampled log as CSV, mirroring [`sample_log`]'s ids.
pub fn sample_to_csv<W: Write>(
    sink: W,
    log: &UncertainLog,
    n: u64,
    seed: u64,
    options: &SampleOptions,
) -> Result<()> {
    let mut writer = csv::Writer::from_writer(sink);
    writer.write_record(CSV_HEADER)?;
    for trace in &log.traces {
        let realizations = sample_realizations(trace, n, seed, options)?;
        let axis = options
            .epoch
            .map(TimeAxis::with_epoch)
            .unwrap_or_else(|| TimeAxis::for_trace(trace));
        for (k, realization) in realizations.iter().enumerate() {
            append_csv(&mut writer, realization, &axis, Some(k as u64 + 1))?;
        }
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{label, ts};

    fn weak_trace() -> UncertainTrace {
        UncertainTrace {
            case_id: "c2".into(),
            events: vec![
                UncertainEvent::new(
                    "e4",
                    "c2",
                    UncertainActivity::certain(label("NightSweats")),
                    UncertainTimestamp::Certain(ts("2011-07-05T12:00:00+00:00")),
                    UncertainIndeterminacy::weak(0.25).unwrap(),
                )
                .unwrap(),
                UncertainEvent::new(
                    "e5",
                    "c2",
                    UncertainActivity::weak_map([(label("PrTP"), 0.9), (label("SecTP"), 0.1)])
                        .unwrap(),
                    UncertainTimestamp::Certain(ts("2011-07-08T12:00:00+00:00")),
                    UncertainIndeterminacy::Determinate,
                )
                .unwrap(),
                UncertainEvent::new(
                    "e6",
                    "c2",
                    UncertainActivity::certain(label("Splenomeg")),
                    UncertainTimestamp::WeakDensity(
                        crate::model::DensitySpec::gaussian(7.0, 1.0).unwrap(),
                    ),
                    UncertainIndeterminacy::Determinate,
                )
                .unwrap(),
            ],
            attributes: Vec::new(),
        }
    }

    #[test]
    fn sampling_is_reproducible() {
        let trace = weak_trace();
        let opts = SampleOptions::default();
        let a = sample_realizations(&trace, 200, 42, &opts).unwrap();
        let b = sample_realizations(&trace, 200, 42, &opts).unwrap();
        assert_eq!(a, b);
        let c = sample_realizations(&trace, 200, 43, &opts).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn steps_are_sorted_and_sourced_from_the_trace() {
        let trace = weak_trace();
        let samples = sample_realizations(&trace, 500, 7, &SampleOptions::default()).unwrap();
        for r in &samples {
            assert!(r.steps.len() >= 2, "e5 and e6 always occur");
            for w in r.steps.windows(2) {
                assert!(
                    w[0].time_days < w[1].time_days
                        || (w[0].time_days == w[1].time_days && w[0].event_id < w[1].event_id)
                );
            }
            for s in &r.steps {
                assert!(["e4", "e5", "e6"].contains(&s.event_id.as_str()));
            }
            let ids: std::collections::HashSet<_> =
                r.steps.iter().map(|s| s.event_id.as_str()).collect();
            assert_eq!(ids.len(), r.steps.len(), "no duplicate events");
        }
    }

    #[test]
    fn empirical_rates_match_annotations() {
        let trace = weak_trace();
        let n = 20_000u64;
        let samples = sample_realizations(&trace, n, 1, &SampleOptions::default()).unwrap();
        let e4_absent = samples
            .iter()
            .filter(|r| r.steps.iter().all(|s| s.event_id != "e4"))
            .count() as f64
            / n as f64;
        // binomial three-sigma band around 0.25
        let se = (0.25f64 * 0.75 / n as f64).sqrt();
        assert!((e4_absent - 0.25).abs() < 3.0 * se, "rate={e4_absent}");

        let sectp = samples
            .iter()
            .filter(|r| r.steps.iter().any(|s| s.activity.as_str() == "SecTP"))
            .count() as f64
            / n as f64;
        let se = (0.1f64 * 0.9 / n as f64).sqrt();
        assert!((sectp - 0.1).abs() < 3.0 * se, "rate={sectp}");
    }

    #[test]
    fn sampled_log_is_plain_and_uniquely_identified() {
        let log = UncertainLog {
            header: LogHeader::default(),
            attributes: Vec::new(),
            traces: vec![weak_trace()],
        };
        let sampled = sample_log(&log, 3, 9, &SampleOptions::default()).unwrap();
        assert_eq!(sampled.traces.len(), 3);
        assert_eq!(sampled.traces[0].case_id, "c2#1");
        assert_eq!(sampled.traces[2].case_id, "c2#3");
        let mut seen = std::collections::HashSet::new();
        for trace in &sampled.traces {
            for event in &trace.events {
                assert!(seen.insert(event.event_id.clone()), "log-unique event ids");
                assert!(!event.is_strongly_uncertain());
                assert!(!event.is_weakly_uncertain());
            }
        }
        assert!(crate::validate::validate_log(&sampled).is_clean());
    }

    #[test]
    fn csv_rows_carry_wall_clock_times() {
        let log = UncertainLog {
            header: LogHeader::default(),
            attributes: Vec::new(),
            traces: vec![weak_trace()],
        };
        let mut buf = Vec::new();
        sample_to_csv(&mut buf, &log, 2, 5, &SampleOptions::default()).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "case_id,step_index,event_id,activity,timestamp,weight"
        );
        let first = lines.next().unwrap();
        assert!(first.starts_with("c2#1,1,"), "row: {first}");
        assert!(first.contains("2011-07-"), "row: {first}");
    }

    #[test]
    fn possibilistic_sampling_rejects_strong_indeterminacy() {
        let mut trace = weak_trace();
        trace.events[0].indeterminacy = UncertainIndeterminacy::StrongIndeterminate;
        let opts = SampleOptions {
            mode: Some(Mode::Possibilistic),
            ..Default::default()
        };
        let err = sample_realizations(&trace, 10, 1, &opts).unwrap_err();
        assert!(matches!(err, Error::UnweighableIndeterminacy));
        // uniform mode needs to be named, then samples the coin
        let err = sample_realizations(&trace, 10, 1, &SampleOptions::default()).unwrap_err();
        assert!(matches!(err, Error::ModeRequired));
        let opts = SampleOptions {
            mode: Some(Mode::Uniform),
            ..Default::default()
        };
        assert!(sample_realizations(&trace, 10, 1, &opts).is_ok());
    }
}
