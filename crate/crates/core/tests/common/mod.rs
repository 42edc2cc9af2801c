//! Shared fixtures for the integration suites: a brute-force realization
//! oracle and seeded random generators for traces and whole logs.
//!
//! The oracle is deliberately naive — try every subset, every
//! permutation, every label combination, and keep what fits — so that it
//! shares no search logic with the library and disagreements point at
//! real bugs.
#![allow(dead_code)]

use std::collections::HashSet;

use chrono::DateTime;
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use uxes::model::{
    label, ActivityLabel, DensitySpec, Timestamp, UncertainActivity, UncertainEvent,
    UncertainIndeterminacy, UncertainLog, UncertainTimestamp, UncertainTrace,
};
use uxes::realize::RealizationShape;
use uxes::xes::{XesAttribute, XesValue, IDENTITY_ID};

pub const MS_PER_DAY: i64 = 86_400_000;
/// 2020-09-13T12:26:40Z; any fixed ms-precision instant works.
pub const BASE_MS: i64 = 1_600_000_000_000;

pub fn at_millis(ms: i64) -> Timestamp {
    Timestamp::from_utc(DateTime::from_timestamp_millis(ms).expect("in range"))
}

/// A fully certain log: `traces` cases of `events_per_trace` events each,
/// activities cycling A-F, timestamps spaced 30 minutes apart, globally
/// unique ids. Useful as a noise-free injection target.
pub fn certain_log(traces: usize, events_per_trace: usize) -> UncertainLog {
    let alphabet = ["A", "B", "C", "D", "E", "F"];
    let mut log = UncertainLog::new();
    for t in 0..traces {
        let mut trace = UncertainTrace::new(format!("c{t}"));
        for j in 0..events_per_trace {
            let minutes = (t * events_per_trace + j) as i64 * 30;
            trace.push(
                UncertainEvent::new(
                    format!("x{t}-{j}"),
                    format!("c{t}"),
                    UncertainActivity::certain(label(alphabet[(t + j) % alphabet.len()])),
                    UncertainTimestamp::certain(at_millis(BASE_MS + minutes * 60_000)),
                    UncertainIndeterminacy::Determinate,
                )
                .unwrap(),
            );
        }
        log.traces.push(trace);
    }
    log
}

pub fn count_events(log: &UncertainLog, pred: impl Fn(&UncertainEvent) -> bool) -> usize {
    log.events().filter(|e| pred(e)).count()
}

/// Every realization shape of `trace` by exhaustive search. Quadratic
/// heart: a subset of events is kept when some permutation admits weakly
/// increasing times inside each event's bounds, checked by placing every
/// event as early as allowed.
pub fn oracle_realizations(trace: &UncertainTrace) -> HashSet<RealizationShape> {
    let events = &trace.events;
    let bounds: Vec<(i64, i64)> = events
        .iter()
        .map(|e| match &e.timestamp {
            UncertainTimestamp::Certain(t) => (t.millis(), t.millis()),
            UncertainTimestamp::StrongInterval { min, max } => (min.millis(), max.millis()),
            UncertainTimestamp::WeakDensity(_) => {
                panic!("oracle handles bounded timestamps only")
            }
        })
        .collect();
    let optional: Vec<usize> = (0..events.len())
        .filter(|&i| events[i].indeterminacy.is_indeterminate())
        .collect();

    let mut shapes = HashSet::new();
    for mask in 0u32..(1 << optional.len()) {
        let chosen: Vec<usize> = (0..events.len())
            .filter(|i| match optional.iter().position(|o| o == i) {
                Some(bit) => mask & (1 << bit) == 0,
                None => true,
            })
            .collect();
        for order in permutations(&chosen) {
            if !order_fits(&bounds, &order) {
                continue;
            }
            let candidates: Vec<Vec<&ActivityLabel>> = order
                .iter()
                .map(|&i| events[i].activity.labels().collect())
                .collect();
            for combo in cartesian(&candidates) {
                shapes.insert(RealizationShape::new(
                    order
                        .iter()
                        .zip(combo)
                        .map(|(&i, l)| (events[i].event_id.clone(), l.clone())),
                ));
            }
        }
    }
    shapes
}

fn order_fits(bounds: &[(i64, i64)], order: &[usize]) -> bool {
    let mut clock = i64::MIN;
    for &i in order {
        let (lo, hi) = bounds[i];
        clock = clock.max(lo);
        if clock > hi {
            return false;
        }
    }
    true
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.is_empty() {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for (i, &head) in items.iter().enumerate() {
        let mut rest: Vec<usize> = items.to_vec();
        rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

fn cartesian<'a>(candidates: &[Vec<&'a ActivityLabel>]) -> Vec<Vec<&'a ActivityLabel>> {
    let mut out: Vec<Vec<&ActivityLabel>> = vec![Vec::new()];
    for options in candidates {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |&l| {
                    let mut next = prefix.clone();
                    next.push(l);
                    next
                })
            })
            .collect();
    }
    out
}

const ALPHABET: [&str; 5] = ["A", "B", "C", "D", "E"];

fn some_labels(rng: &mut StdRng, count: usize) -> Vec<ActivityLabel> {
    let mut pool: Vec<&str> = ALPHABET.to_vec();
    pool.shuffle(rng);
    pool.truncate(count);
    pool.into_iter().map(label).collect()
}

/// A trace the exhaustive enumerator accepts: up to 7 events with point
/// or interval timestamps; label sets and weak maps on a couple of
/// events; up to two indeterminate events. Sized so that subset ×
/// permutation × label blow-up stays in the tens of thousands.
pub fn random_enumeration_trace(seed: u64) -> UncertainTrace {
    let mut rng = StdRng::seed_from_u64(seed);
    let n = rng.gen_range(1..=7);
    let mut multi_label_left = 2;
    let mut indeterminate_left = 2;
    let mut events = Vec::with_capacity(n);
    let mut prev_center = BASE_MS;
    for i in 0..n {
        let center = if i > 0 && rng.gen_bool(0.125) {
            prev_center // exact tie with the previous event
        } else {
            BASE_MS + rng.gen_range(0..6 * MS_PER_DAY)
        };
        prev_center = center;

        let timestamp = if rng.gen_bool(0.5) {
            let halfwidth = rng.gen_range(1..=(3 * MS_PER_DAY / 4));
            UncertainTimestamp::interval(at_millis(center - halfwidth), at_millis(center + halfwidth))
                .expect("min < max")
        } else {
            UncertainTimestamp::certain(at_millis(center))
        };

        let activity = if multi_label_left > 0 && rng.gen_bool(0.4) {
            multi_label_left -= 1;
            let count = rng.gen_range(2..=3);
            let labels = some_labels(&mut rng, count);
            if rng.gen_bool(0.5) {
                UncertainActivity::strong_set(labels).expect("non-empty")
            } else {
                let p = rng.gen_range(0.1..0.9);
                let mut entries: Vec<(ActivityLabel, f64)> = Vec::new();
                let share = (1.0 - p) / (labels.len() - 1) as f64;
                for (j, l) in labels.into_iter().enumerate() {
                    entries.push((l, if j == 0 { p } else { share }));
                }
                UncertainActivity::weak_map(entries).expect("stochastic")
            }
        } else {
            UncertainActivity::certain(some_labels(&mut rng, 1).pop().expect("one"))
        };

        let indeterminacy = if indeterminate_left > 0 && rng.gen_bool(0.3) {
            indeterminate_left -= 1;
            if rng.gen_bool(0.5) {
                UncertainIndeterminacy::StrongIndeterminate
            } else {
                UncertainIndeterminacy::weak(rng.gen_range(0.05..0.95)).expect("in range")
            }
        } else {
            UncertainIndeterminacy::Determinate
        };

        events.push(
            UncertainEvent::new(format!("e{}", i + 1), "random", activity, timestamp, indeterminacy)
                .expect("constructed valid"),
        );
    }
    UncertainTrace::new("random").with_events(events)
}

/// Like [`random_enumeration_trace`] on a disjoint seed stream. That
/// generator only ever emits weak maps whose probabilities sum to 1
/// within floating error, so the weights of a full enumeration must
/// total exactly 1 when strong annotations are weighed uniformly.
pub fn random_stochastic_trace(seed: u64) -> UncertainTrace {
    random_enumeration_trace(seed ^ 0x5151_5151_5151_5151)
}

/// A random valid log exercising every wire feature: certain events,
/// label sets, weak maps (sometimes sub-stochastic), intervals,
/// densities of all kinds, both indeterminacy flavors, explicit event
/// ids, and uninterpreted extra attributes at every level.
pub fn random_log(seed: u64) -> UncertainLog {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut log = UncertainLog::new();
    if rng.gen_bool(0.3) {
        log.attributes.push(XesAttribute::string("source", "generator"));
    }
    let traces = rng.gen_range(0..=3);
    let mut unique = 0u32;
    for t in 0..traces {
        let mut trace = UncertainTrace::new(format!("case-{t}"));
        if rng.gen_bool(0.3) {
            trace.attributes.push(XesAttribute::new(
                "weight",
                XesValue::Int(rng.gen_range(-5..100)),
            ));
        }
        for _ in 0..rng.gen_range(0..=5) {
            unique += 1;
            trace.push(random_event(&mut rng, &format!("case-{t}"), unique));
        }
        log.traces.push(trace);
    }
    log
}

fn random_event(rng: &mut StdRng, case_id: &str, unique: u32) -> UncertainEvent {
    let center = BASE_MS + rng.gen_range(0..30 * MS_PER_DAY);

    let timestamp = match rng.gen_range(0..4) {
        0 => UncertainTimestamp::certain(at_millis(center)),
        1 => {
            let halfwidth = rng.gen_range(1..=2 * MS_PER_DAY);
            UncertainTimestamp::interval(at_millis(center - halfwidth), at_millis(center + halfwidth))
                .expect("min < max")
        }
        2 => UncertainTimestamp::certain(at_millis(center)),
        _ => {
            let spec = match rng.gen_range(0..3) {
                0 => DensitySpec::gaussian(rng.gen_range(0.0..30.0), rng.gen_range(0.1..3.0)),
                1 => {
                    let low = rng.gen_range(0.0..20.0);
                    DensitySpec::uniform(low, low + rng.gen_range(0.1..10.0))
                }
                _ => DensitySpec::gamma(rng.gen_range(0.5..5.0), rng.gen_range(0.1..3.0)),
            };
            UncertainTimestamp::density(spec.expect("params in range")).expect("valid spec")
        }
    };

    let activity = match rng.gen_range(0..4) {
        0 | 1 => UncertainActivity::certain(some_labels(rng, 1).pop().expect("one")),
        2 => {
            let count = rng.gen_range(2..=4);
            UncertainActivity::strong_set(some_labels(rng, count)).expect("non-empty")
        }
        _ => {
            let count = rng.gen_range(2..=3);
            let labels = some_labels(rng, count);
            let mass: f64 = if rng.gen_bool(0.3) {
                rng.gen_range(0.3..0.9) // deliberately sub-stochastic
            } else {
                1.0
            };
            let share = mass / labels.len() as f64;
            UncertainActivity::weak_map(labels.into_iter().map(|l| (l, share)))
                .expect("within mass bound")
        }
    };

    let indeterminacy = match rng.gen_range(0..4) {
        0 | 1 => UncertainIndeterminacy::Determinate,
        2 => UncertainIndeterminacy::StrongIndeterminate,
        _ => UncertainIndeterminacy::weak(rng.gen_range(0.05..1.0)).expect("in range"),
    };

    let event_id = format!("ev-{unique}");
    let mut extra = Vec::new();
    if rng.gen_bool(0.5) {
        // An explicit wire id makes the chosen event id survive
        // serialization; without it the reader synthesizes one.
        extra.push(XesAttribute::new(
            IDENTITY_ID,
            XesValue::Id(event_id.clone()),
        ));
    }
    if rng.gen_bool(0.3) {
        extra.push(XesAttribute::new("cost", XesValue::Double(rng.gen_range(0.0..9.9))));
    }
    if rng.gen_bool(0.2) {
        extra.push(
            XesAttribute::string("org:resource", "R2").with_children(vec![XesAttribute::new(
                "certified",
                XesValue::Bool(rng.gen_bool(0.5)),
            )]),
        );
    }

    UncertainEvent::new(event_id, case_id, activity, timestamp, indeterminacy)
        .expect("constructed valid")
        .with_extra(extra)
}
