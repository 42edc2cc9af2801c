//! Realizations of an uncertain trace.
//!
//! A realization picks a concrete world consistent with every
//! annotation: a subset of events (indeterminate ones may be left out),
//! a total order compatible with the timestamp bounds, and one label per
//! event. `enumerate_realizations` lists every such *shape*,
//! `realization_probability` weighs one shape, `sum_check` verifies the
//! weights of all shapes add up to 1, and [`sample`] draws concrete
//! realizations at random.
//!
//! # Weighing modes
//!
//! Weak annotations carry their own probabilities and always use them.
//! Strong annotations carry none, so a [`Mode`] must say how to weigh
//! them; as long as a trace has any strong uncertainty, operations that
//! need numbers refuse to run without one ([`Error::ModeRequired`]).
//!
//! * [`Mode::Uniform`] spreads mass evenly: `1/n` per member of a
//!   strong label set, uniform density over a strong interval, and a
//!   fifty-fifty coin for strong indeterminacy.
//! * [`Mode::Possibilistic`] grades possibility instead of probability:
//!   every member of a strong set and every feasible order contributes
//!   factor 1, so totals may exceed 1. Strong indeterminacy admits no
//!   such reading and is rejected ([`Error::UnweighableIndeterminacy`]).

pub mod order;
pub mod sample;

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::Serialize;

use crate::axis::TimeAxis;
use crate::error::{Error, Result};
use crate::model::{
    ActivityLabel, UncertainActivity, UncertainEvent, UncertainIndeterminacy, UncertainTimestamp,
    UncertainTrace, PROBABILITY_EPSILON,
};
use crate::rng::trace_stream;
use order::{exact_order_probability, feasible, mc_order_probability, SeqItem, TimeModel};

/// How strong (probability-free) annotations are weighed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Spread mass evenly over each strong support.
    Uniform,
    /// Grade possibility: factor 1 per admissible choice.
    Possibilistic,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Mode::Uniform),
            "possibilistic" => Ok(Mode::Possibilistic),
            other => Err(Error::InvalidConfig(format!(
                "unknown mode {other:?}; expected \"uniform\" or \"possibilistic\""
            ))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Uniform => "uniform",
            Mode::Possibilistic => "possibilistic",
        })
    }
}

/// One step of a realization shape: which event occurred and under which
/// label.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ShapeStep {
    pub event_id: String,
    pub activity: ActivityLabel,
}

/// A realization with the concrete times abstracted away: the events
/// that occurred, in order, each with its chosen label. Events of the
/// source trace missing from `steps` were realized as "did not happen".
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealizationShape {
    pub steps: Vec<ShapeStep>,
}

impl RealizationShape {
    pub fn new<I, L>(steps: I) -> Self
    where
        I: IntoIterator<Item = (L, ActivityLabel)>,
        L: Into<String>,
    {
        RealizationShape {
            steps: steps
                .into_iter()
                .map(|(event_id, activity)| ShapeStep {
                    event_id: event_id.into(),
                    activity,
                })
                .collect(),
        }
    }

    pub fn event_ids(&self) -> impl Iterator<Item = &str> {
        self.steps.iter().map(|s| s.event_id.as_str())
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

#[derive(Clone, Copy, Debug)]
pub struct EnumerateOptions {
    /// Hard cap on the trace size; enumeration over more events is
    /// refused because the output grows factorially.
    pub max_events: usize,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions { max_events: 12 }
    }
}

/// Lists every realization shape of the trace: each admissible subset of
/// events (indeterminate ones are optional, determinate ones mandatory),
/// each total order the timestamp bounds allow, and each combination of
/// candidate labels. Distinct sequences are produced exactly once.
///
/// An order is allowed when times can be placed weakly increasing within
/// each event's bounds: take every event as early as its bound and the
/// previous event permit, and check the result does not overshoot the
/// upper bound.
///
/// Timestamp densities have unbounded candidate orders in general, so a
/// trace containing one is rejected with
/// [`Error::ContinuousDensityPresent`]; traces larger than
/// [`EnumerateOptions::max_events`] are rejected with
/// [`Error::TooManyEvents`].
pub fn enumerate_realizations(
    trace: &UncertainTrace,
    options: &EnumerateOptions,
) -> Result<Vec<RealizationShape>> {
    let n = trace.events.len();
    if n > options.max_events {
        return Err(Error::TooManyEvents {
            count: n,
            cap: options.max_events,
        });
    }
    let mut bounds = Vec::with_capacity(n);
    for event in &trace.events {
        match &event.timestamp {
            UncertainTimestamp::Certain(t) => bounds.push((t.millis(), t.millis())),
            UncertainTimestamp::StrongInterval { min, max } => {
                bounds.push((min.millis(), max.millis()))
            }
            UncertainTimestamp::WeakDensity(_) => return Err(Error::ContinuousDensityPresent),
        }
    }
    let optional: Vec<usize> = (0..n)
        .filter(|&i| trace.events[i].indeterminacy != UncertainIndeterminacy::Determinate)
        .collect();

    let mut shapes = Vec::new();
    for mask in 0..(1u32 << optional.len()) {
        let included: Vec<usize> = (0..n)
            .filter(|i| {
                optional
                    .iter()
                    .position(|o| o == i)
                    .map_or(true, |bit| mask & (1 << bit) == 0)
            })
            .collect();
        let mut sequence = Vec::with_capacity(included.len());
        order_dfs(
            trace,
            &bounds,
            &included,
            &mut vec![false; included.len()],
            &mut sequence,
            i64::MIN,
            &mut shapes,
        );
    }
    Ok(shapes)
}

fn order_dfs(
    trace: &UncertainTrace,
    bounds: &[(i64, i64)],
    included: &[usize],
    used: &mut Vec<bool>,
    sequence: &mut Vec<usize>,
    last: i64,
    shapes: &mut Vec<RealizationShape>,
) {
    if sequence.len() == included.len() {
        expand_labels(trace, sequence, &mut Vec::new(), shapes);
        return;
    }
    for (slot, &event) in included.iter().enumerate() {
        if used[slot] {
            continue;
        }
        let (lo, hi) = bounds[event];
        let t = last.max(lo);
        if t <= hi {
            used[slot] = true;
            sequence.push(event);
            order_dfs(trace, bounds, included, used, sequence, t, shapes);
            sequence.pop();
            used[slot] = false;
        }
    }
}

fn expand_labels(
    trace: &UncertainTrace,
    sequence: &[usize],
    chosen: &mut Vec<ActivityLabel>,
    shapes: &mut Vec<RealizationShape>,
) {
    if chosen.len() == sequence.len() {
        shapes.push(RealizationShape {
            steps: sequence
                .iter()
                .zip(chosen.iter())
                .map(|(&i, label)| ShapeStep {
                    event_id: trace.events[i].event_id.clone(),
                    activity: label.clone(),
                })
                .collect(),
        });
        return;
    }
    let event = &trace.events[sequence[chosen.len()]];
    for label in event.activity.labels() {
        chosen.push(label.clone());
        expand_labels(trace, sequence, chosen, shapes);
        chosen.pop();
    }
}

/// What to do when a weak annotation's probabilities sum below 1.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum SubStochasticPolicy {
    /// Scale the masses up to sum 1 and flag the result.
    #[default]
    Renormalize,
    /// Refuse with [`Error::SubStochasticMass`].
    Error,
}

#[derive(Clone, Copy, Debug)]
pub struct ProbabilityOptions {
    /// Weighing mode for strong annotations. Leaving it unset is an
    /// error as soon as the trace contains strong uncertainty.
    pub mode: Option<Mode>,
    /// Override for the day-axis epoch; defaults to the trace's own.
    pub epoch: Option<DateTime<Utc>>,
    pub substochastic: SubStochasticPolicy,
    /// Monte Carlo sample count used when a timestamp density makes the
    /// order probability analytically intractable here.
    pub mc_samples: u64,
    /// Seed for the Monte Carlo estimator (per-trace substream derived
    /// from the case id).
    pub mc_seed: u64,
}

impl Default for ProbabilityOptions {
    fn default() -> Self {
        ProbabilityOptions {
            mode: None,
            epoch: None,
            substochastic: SubStochasticPolicy::default(),
            mc_samples: 1_000_000,
            mc_seed: 0,
        }
    }
}

impl ProbabilityOptions {
    pub fn with_mode(mode: Mode) -> Self {
        ProbabilityOptions {
            mode: Some(mode),
            ..Default::default()
        }
    }
}

/// The weight of one realization shape.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ShapeProbability {
    /// Joint weight: subset choices x label choices x order.
    pub probability: f64,
    /// The order factor alone (exactly 1 when the order is forced).
    pub order_probability: f64,
    /// Standard error of `probability` when Monte Carlo was involved;
    /// `None` for exact results.
    pub std_error: Option<f64>,
    /// Whether some sub-stochastic weak annotation was scaled up to mass 1.
    pub renormalized: bool,
    /// The mode the numbers are valid under.
    pub mode: Mode,
}

/// Weighs one realization shape of `trace`.
///
/// The weight factors into independent choices: for each indeterminate
/// event, the probability it occurred (or not); for each step, the
/// probability of its label; and the probability that the included
/// events' timestamps fall in exactly the given order. Point and
/// interval timestamps make the order factor exact; a density switches
/// it to a seeded Monte Carlo estimate with a reported standard error.
///
/// A shape that is no realization of the trace (wrong label, infeasible
/// order, missing determinate event) weighs 0. Steps referring to
/// unknown events are an error, as is a duplicated step.
pub fn realization_probability(
    trace: &UncertainTrace,
    shape: &RealizationShape,
    options: &ProbabilityOptions,
) -> Result<ShapeProbability> {
    let mode = effective_mode(trace, options.mode)?;
    let axis = options
        .epoch
        .map(TimeAxis::with_epoch)
        .unwrap_or_else(|| TimeAxis::for_trace(trace));

    let mut by_id: HashMap<&str, &UncertainEvent> = HashMap::new();
    for event in &trace.events {
        by_id.insert(event.event_id.as_str(), event);
    }
    let mut included: HashMap<&str, &ActivityLabel> = HashMap::new();
    for step in &shape.steps {
        let Some(event) = by_id.get(step.event_id.as_str()) else {
            return Err(Error::UnknownEventRef {
                case_id: trace.case_id.clone(),
                event_id: step.event_id.clone(),
            });
        };
        if included.insert(event.event_id.as_str(), &step.activity).is_some() {
            return Err(Error::InvalidConfig(format!(
                "event {:?} appears twice in the realization",
                step.event_id
            )));
        }
    }

    let mut renormalized = false;
    let mut discrete = 1.0f64;

    for event in &trace.events {
        let present = included.contains_key(event.event_id.as_str());
        match event.indeterminacy {
            UncertainIndeterminacy::Determinate => {
                if !present {
                    return Ok(zero(mode));
                }
            }
            UncertainIndeterminacy::StrongIndeterminate => match mode {
                Mode::Uniform => discrete *= 0.5,
                Mode::Possibilistic => return Err(Error::UnweighableIndeterminacy),
            },
            UncertainIndeterminacy::WeakIndeterminate(p_not) => {
                discrete *= if present { 1.0 - p_not } else { p_not };
            }
        }
    }

    for step in &shape.steps {
        let event = by_id[step.event_id.as_str()];
        match &event.activity {
            UncertainActivity::StrongSet(set) => {
                if !set.contains(&step.activity) {
                    return Ok(zero(mode));
                }
                if mode == Mode::Uniform {
                    discrete /= set.len() as f64;
                }
            }
            UncertainActivity::WeakMap(map) => {
                let Some(&p) = map.get(&step.activity) else {
                    return Ok(zero(mode));
                };
                let mass: f64 = map.values().sum();
                if mass < 1.0 - PROBABILITY_EPSILON {
                    match options.substochastic {
                        SubStochasticPolicy::Renormalize => {
                            discrete *= p / mass;
                            renormalized = true;
                        }
                        SubStochasticPolicy::Error => {
                            return Err(Error::SubStochasticMass { sum: mass })
                        }
                    }
                } else {
                    discrete *= p;
                }
            }
        }
    }

    let models: Vec<TimeModel> = shape
        .steps
        .iter()
        .map(|s| TimeModel::from_timestamp(&by_id[s.event_id.as_str()].timestamp, &axis))
        .collect();
    let items: Vec<SeqItem<'_>> = models
        .iter()
        .zip(&shape.steps)
        .map(|(model, step)| SeqItem {
            model,
            id: step.event_id.as_str(),
        })
        .collect();

    let has_density = models.iter().any(TimeModel::is_density);
    let (order_probability, order_se) = match mode {
        Mode::Possibilistic => (if feasible(&items) { 1.0 } else { 0.0 }, None),
        Mode::Uniform => {
            if has_density {
                let mut rng = trace_stream(options.mc_seed, &trace.case_id);
                let (p, se) = mc_order_probability(&items, options.mc_samples, &mut rng);
                (p, Some(se))
            } else {
                (exact_order_probability(&items), None)
            }
        }
    };

    Ok(ShapeProbability {
        probability: discrete * order_probability,
        order_probability,
        std_error: order_se.map(|se| discrete * se),
        renormalized,
        mode,
    })
}

fn zero(mode: Mode) -> ShapeProbability {
    ShapeProbability {
        probability: 0.0,
        order_probability: 0.0,
        std_error: None,
        renormalized: false,
        mode,
    }
}

/// Resolves the weighing mode: required as soon as any strong
/// uncertainty is present, irrelevant (defaulting to uniform) otherwise.
pub(crate) fn effective_mode(trace: &UncertainTrace, mode: Option<Mode>) -> Result<Mode> {
    match mode {
        Some(m) => Ok(m),
        None => {
            if trace.events.iter().any(UncertainEvent::is_strongly_uncertain) {
                Err(Error::ModeRequired)
            } else {
                Ok(Mode::Uniform)
            }
        }
    }
}

/// Enumerates all realization shapes and sums their weights. For a trace
/// free of timestamp densities and weighed in uniform mode the result
/// must be 1 up to float error; possibilistic totals count admissible
/// worlds and may exceed 1.
pub fn sum_check(trace: &UncertainTrace, options: &ProbabilityOptions) -> Result<f64> {
    let shapes = enumerate_realizations(trace, &EnumerateOptions::default())?;
    let mut total = 0.0;
    for shape in &shapes {
        total += realization_probability(trace, shape, options)?.probability;
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{label, ts, UncertainTimestamp};

    fn event(
        id: &str,
        activity: UncertainActivity,
        timestamp: UncertainTimestamp,
        indeterminacy: UncertainIndeterminacy,
    ) -> UncertainEvent {
        UncertainEvent::new(id, "c1", activity, timestamp, indeterminacy).unwrap()
    }

    /// Three events: a strongly indeterminate point, a two-label set at a
    /// later point, and an interval spanning both.
    fn mixed_trace() -> UncertainTrace {
        UncertainTrace {
            case_id: "c1".into(),
            events: vec![
                event(
                    "e1",
                    UncertainActivity::certain(label("NightSweats")),
                    UncertainTimestamp::Certain(ts("2011-07-05T12:00:00+00:00")),
                    UncertainIndeterminacy::StrongIndeterminate,
                ),
                event(
                    "e2",
                    UncertainActivity::strong_set([label("PrTP"), label("SecTP")]).unwrap(),
                    UncertainTimestamp::Certain(ts("2011-07-08T12:00:00+00:00")),
                    UncertainIndeterminacy::Determinate,
                ),
                event(
                    "e3",
                    UncertainActivity::certain(label("Splenomeg")),
                    UncertainTimestamp::interval(
                        ts("2011-07-04T12:00:00+00:00"),
                        ts("2011-07-10T12:00:00+00:00"),
                    )
                    .unwrap(),
                    UncertainIndeterminacy::Determinate,
                ),
            ],
            attributes: Vec::new(),
        }
    }

    #[test]
    fn mixed_trace_has_ten_shapes() {
        let shapes = enumerate_realizations(&mixed_trace(), &EnumerateOptions::default()).unwrap();
        assert_eq!(shapes.len(), 10);
        // with e1: three orders, two labels each; without: two orders
        let with_e1 = shapes.iter().filter(|s| s.event_ids().any(|i| i == "e1")).count();
        assert_eq!(with_e1, 6);
        for shape in &shapes {
            assert!(shape.event_ids().any(|i| i == "e2"));
            assert!(shape.event_ids().any(|i| i == "e3"));
        }
        // all shapes distinct
        let set: std::collections::BTreeSet<_> = shapes.iter().cloned().collect();
        assert_eq!(set.len(), 10);
    }

    #[test]
    fn shape_weights_sum_to_one_in_uniform_mode() {
        let total = sum_check(
            &mixed_trace(),
            &ProbabilityOptions::with_mode(Mode::Uniform),
        )
        .unwrap();
        assert!((total - 1.0).abs() < 1e-9, "total={total}");
    }

    #[test]
    fn one_shape_weight_factorizes() {
        // e1 occurs (0.5), e2 realized as SecTP (0.5), order e1 e3 e2 (1/2)
        let trace = mixed_trace();
        let shape = RealizationShape::new([
            ("e1", label("NightSweats")),
            ("e3", label("Splenomeg")),
            ("e2", label("SecTP")),
        ]);
        let p = realization_probability(
            &trace,
            &shape,
            &ProbabilityOptions::with_mode(Mode::Uniform),
        )
        .unwrap();
        assert!((p.order_probability - 0.5).abs() < 1e-12);
        assert!((p.probability - 0.5 * 0.5 * 0.5).abs() < 1e-12);
        assert_eq!(p.std_error, None);
        assert!(!p.renormalized);
        assert_eq!(p.mode, Mode::Uniform);
    }

    #[test]
    fn mode_is_required_with_strong_uncertainty() {
        let trace = mixed_trace();
        let shape = enumerate_realizations(&trace, &EnumerateOptions::default())
            .unwrap()
            .remove(0);
        let err =
            realization_probability(&trace, &shape, &ProbabilityOptions::default()).unwrap_err();
        assert!(matches!(err, Error::ModeRequired));
    }

    #[test]
    fn possibilistic_mode_rejects_strong_indeterminacy() {
        let err = sum_check(
            &mixed_trace(),
            &ProbabilityOptions::with_mode(Mode::Possibilistic),
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnweighableIndeterminacy));
    }

    #[test]
    fn possibilistic_mode_counts_admissible_worlds() {
        // drop the indeterminate event: 3 orders x 2 labels, factor 1 each
        let mut trace = mixed_trace();
        trace.events.remove(0);
        let total = sum_check(
            &trace,
            &ProbabilityOptions::with_mode(Mode::Possibilistic),
        )
        .unwrap();
        assert!((total - 4.0).abs() < 1e-9, "total={total}");
        let shapes = enumerate_realizations(&trace, &EnumerateOptions::default()).unwrap();
        assert_eq!(shapes.len(), 4);
    }

    #[test]
    fn determinate_events_cannot_be_dropped() {
        let trace = mixed_trace();
        let shape = RealizationShape::new([("e2", label("PrTP"))]);
        let p = realization_probability(
            &trace,
            &shape,
            &ProbabilityOptions::with_mode(Mode::Uniform),
        )
        .unwrap();
        assert_eq!(p.probability, 0.0);
    }

    #[test]
    fn foreign_labels_weigh_zero_and_foreign_ids_error() {
        let trace = mixed_trace();
        let wrong_label = RealizationShape::new([
            ("e1", label("NightSweats")),
            ("e3", label("Splenomeg")),
            ("e2", label("Surgery")),
        ]);
        let p = realization_probability(
            &trace,
            &wrong_label,
            &ProbabilityOptions::with_mode(Mode::Uniform),
        )
        .unwrap();
        assert_eq!(p.probability, 0.0);

        let foreign = RealizationShape::new([("e9", label("PrTP"))]);
        let err = realization_probability(
            &trace,
            &foreign,
            &ProbabilityOptions::with_mode(Mode::Uniform),
        )
        .unwrap_err();
        assert!(matches!(err, Error::UnknownEventRef { .. }));
    }

    #[test]
    fn weak_annotations_need_no_mode() {
        let trace = UncertainTrace {
            case_id: "c1".into(),
            events: vec![
                event(
                    "e4",
                    UncertainActivity::certain(label("NightSweats")),
                    UncertainTimestamp::Certain(ts("2011-07-05T12:00:00+00:00")),
                    UncertainIndeterminacy::weak(0.25).unwrap(),
                ),
                event(
                    "e5",
                    UncertainActivity::weak_map([(label("PrTP"), 0.9), (label("SecTP"), 0.1)])
                        .unwrap(),
                    UncertainTimestamp::Certain(ts("2011-07-08T12:00:00+00:00")),
                    UncertainIndeterminacy::Determinate,
                ),
            ],
            attributes: Vec::new(),
        };
        let total = sum_check(&trace, &ProbabilityOptions::default()).unwrap();
        assert!((total - 1.0).abs() < 1e-9, "total={total}");

        let shape =
            RealizationShape::new([("e4", label("NightSweats")), ("e5", label("PrTP"))]);
        let p = realization_probability(&trace, &shape, &ProbabilityOptions::default()).unwrap();
        assert!((p.probability - 0.75 * 0.9).abs() < 1e-12);
        assert_eq!(p.mode, Mode::Uniform);
    }

    #[test]
    fn substochastic_maps_renormalize_or_error() {
        let mut map = indexmap::IndexMap::new();
        map.insert(label("A"), 0.6);
        let trace = UncertainTrace {
            case_id: "c1".into(),
            events: vec![event(
                "e1",
                UncertainActivity::WeakMap(map),
                UncertainTimestamp::Certain(ts("2011-07-05T12:00:00+00:00")),
                UncertainIndeterminacy::Determinate,
            )],
            attributes: Vec::new(),
        };
        let shape = RealizationShape::new([("e1", label("A"))]);
        let p = realization_probability(&trace, &shape, &ProbabilityOptions::default()).unwrap();
        assert!((p.probability - 1.0).abs() < 1e-12);
        assert!(p.renormalized);

        let strict = ProbabilityOptions {
            substochastic: SubStochasticPolicy::Error,
            ..Default::default()
        };
        let err = realization_probability(&trace, &shape, &strict).unwrap_err();
        assert!(matches!(err, Error::SubStochasticMass { .. }));
    }

    #[test]
    fn enumeration_guards() {
        let mut trace = mixed_trace();
        let small = EnumerateOptions { max_events: 2 };
        assert!(matches!(
            enumerate_realizations(&trace, &small).unwrap_err(),
            Error::TooManyEvents { count: 3, cap: 2 }
        ));

        trace.events[2].timestamp = UncertainTimestamp::WeakDensity(
            crate::model::DensitySpec::gaussian(7.0, 1.0).unwrap(),
        );
        assert!(matches!(
            enumerate_realizations(&trace, &EnumerateOptions::default()).unwrap_err(),
            Error::ContinuousDensityPresent
        ));
    }

    #[test]
    fn empty_shape_is_the_all_excluded_world() {
        let trace = UncertainTrace {
            case_id: "c1".into(),
            events: vec![event(
                "e4",
                UncertainActivity::certain(label("NightSweats")),
                UncertainTimestamp::Certain(ts("2011-07-05T12:00:00+00:00")),
                UncertainIndeterminacy::weak(0.25).unwrap(),
            )],
            attributes: Vec::new(),
        };
        let shapes = enumerate_realizations(&trace, &EnumerateOptions::default()).unwrap();
        assert_eq!(shapes.len(), 2);
        let empty = shapes.iter().find(|s| s.is_empty()).unwrap();
        let p = realization_probability(&trace, empty, &ProbabilityOptions::default()).unwrap();
        assert!((p.probability - 0.25).abs() < 1e-12);
        assert_eq!(p.order_probability, 1.0);
    }
}
