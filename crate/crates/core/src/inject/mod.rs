//! Controlled deformation of certain logs into uncertain ones.
//!
//! Experiments on uncertain event data need inputs with known ground
//! truth. [`inject`] takes a plain log and, independently per event with
//! configured probabilities, widens its annotations: extra candidate
//! labels (a set, or a probability map with Dirichlet-drawn masses),
//! widened timestamps (an interval `t ± h`, or a density centered at
//! `t`), and indeterminacy (bare, or with a drawn occurrence
//! probability). The true value always stays inside the injected
//! support, and the whole transformation is a pure, seeded function of
//! `(log, config)` — rerunning it reproduces the same output.
//!
//! [`directive`] offers the deterministic counterpart: a flat text file
//! naming exact annotations per event, so specific uncertain traces can
//! be constructed byte for byte.

pub mod directive;

use rand::Rng;
use rand_distr::{Dirichlet, Distribution};
use rayon::prelude::*;

use crate::axis::{TimeAxis, MS_PER_DAY};
use crate::error::{Error, Result};
use crate::model::{
    ActivityLabel, DensityKind, DensitySpec, Timestamp, UncertainActivity, UncertainEvent,
    UncertainIndeterminacy, UncertainLog, UncertainTimestamp, UncertainTrace,
};
use crate::rng::trace_stream;
use crate::stats::{uncertainty_stats, StatsSummary};

/// Parameters of the stochastic injector. The default configuration is
/// the identity: all probabilities zero; deserialization treats every
/// field as optional accordingly.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InjectionConfig {
    /// Probability an event's activity gains extra candidate labels.
    pub p_activity: f64,
    /// How many extra labels each affected activity receives.
    pub k_labels: usize,
    /// Probability an event's timestamp widens.
    pub p_timestamp: f64,
    /// Half-width of injected intervals, in days; also the scale of
    /// injected densities.
    pub interval_halfwidth_days: f64,
    /// Probability an event becomes indeterminate.
    pub p_indeterminacy: f64,
    /// Probability an injected annotation is weak (carries
    /// probabilities) rather than strong.
    pub weak_fraction: f64,
    /// Concentration of the symmetric Dirichlet behind weak activity
    /// masses; 1 is uniform over the simplex.
    pub dirichlet_alpha: f64,
    /// Shape of injected weak timestamps; gamma is not supported here
    /// because it cannot be centered on the true time.
    pub density_kind: DensityKind,
    /// Upper bound for drawn non-occurrence probabilities. Keeping it at
    /// the default 0.5 preserves majority-occurrence semantics.
    pub indeterminacy_cap: f64,
    pub seed: u64,
}

impl Default for InjectionConfig {
    fn default() -> Self {
        InjectionConfig {
            p_activity: 0.0,
            k_labels: 1,
            p_timestamp: 0.0,
            interval_halfwidth_days: 1.0,
            p_indeterminacy: 0.0,
            weak_fraction: 0.0,
            dirichlet_alpha: 1.0,
            density_kind: DensityKind::Gaussian,
            indeterminacy_cap: 0.5,
            seed: 0,
        }
    }
}

impl InjectionConfig {
    pub fn check(&self) -> Result<()> {
        let probability = |name: &str, v: f64| {
            if (0.0..=1.0).contains(&v) {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{name} must lie in [0, 1], got {v}")))
            }
        };
        probability("p_activity", self.p_activity)?;
        probability("p_timestamp", self.p_timestamp)?;
        probability("p_indeterminacy", self.p_indeterminacy)?;
        probability("weak_fraction", self.weak_fraction)?;
        if self.k_labels < 1 {
            return Err(Error::InvalidConfig("k_labels must be at least 1".into()));
        }
        if !(self.interval_halfwidth_days > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "interval_halfwidth_days must be positive, got {}",
                self.interval_halfwidth_days
            )));
        }
        if !(self.dirichlet_alpha > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "dirichlet_alpha must be positive, got {}",
                self.dirichlet_alpha
            )));
        }
        if self.density_kind == DensityKind::Gamma {
            return Err(Error::InvalidConfig(
                "density_kind must be GAUSSIAN or UNIFORM".into(),
            ));
        }
        if !(self.indeterminacy_cap > 0.0 && self.indeterminacy_cap <= 1.0) {
            return Err(Error::InvalidConfig(format!(
                "indeterminacy_cap must lie in (0, 1], got {}",
                self.indeterminacy_cap
            )));
        }
        Ok(())
    }
}

/// Deforms a certain log according to `config`. Every event keeps its id
/// and its extra attributes; annotations that the draws leave alone stay
/// certain. Input events that already carry uncertainty are refused
/// ([`Error::InputNotCertain`]); when extra labels are requested the
/// alphabet must be large enough to supply them
/// ([`Error::AlphabetTooSmall`]).
pub fn inject(log: &UncertainLog, config: &InjectionConfig) -> Result<UncertainLog> {
    config.check()?;
    for event in log.events() {
        check_certain(event)?;
    }
    let alphabet = log.alphabet();
    if config.p_activity > 0.0 && config.k_labels >= alphabet.len().max(1) {
        return Err(Error::AlphabetTooSmall {
            k: config.k_labels,
            alphabet: alphabet.len(),
        });
    }
    let traces: Vec<UncertainTrace> = log
        .traces
        .par_iter()
        .map(|trace| inject_trace(trace, config, &alphabet))
        .collect::<Result<_>>()?;
    Ok(UncertainLog {
        header: log.header.clone(),
        attributes: log.attributes.clone(),
        traces,
    })
}

fn check_certain(event: &UncertainEvent) -> Result<()> {
    let field = if !matches!(&event.activity, UncertainActivity::StrongSet(s) if s.len() == 1) {
        Some("activity")
    } else if !matches!(event.timestamp, UncertainTimestamp::Certain(_)) {
        Some("timestamp")
    } else if event.indeterminacy != UncertainIndeterminacy::Determinate {
        Some("indeterminacy")
    } else {
        None
    };
    match field {
        Some(field) => Err(Error::InputNotCertain {
            context: format!("event {} of case {}", event.event_id, event.case_id),
            field,
        }),
        None => Ok(()),
    }
}

fn inject_trace(
    trace: &UncertainTrace,
    config: &InjectionConfig,
    alphabet: &[ActivityLabel],
) -> Result<UncertainTrace> {
    let mut rng = trace_stream(config.seed, &trace.case_id);
    let halfwidth = chrono::Duration::milliseconds(
        (config.interval_halfwidth_days * MS_PER_DAY).round() as i64,
    );

    // First decide every annotation and make all random draws; density
    // parameters are filled in afterwards because they live on the day
    // axis, and the axis depends on which timestamps stay bounded.
    let mut activities = Vec::with_capacity(trace.events.len());
    let mut timestamps = Vec::with_capacity(trace.events.len());
    let mut indeterminacies = Vec::with_capacity(trace.events.len());
    // (event index, true time) of timestamps that become densities
    let mut pending_density = Vec::new();

    for (i, event) in trace.events.iter().enumerate() {
        let truth = certain_parts(event);

        let activity = if config.p_activity > 0.0 && rng.gen_bool(config.p_activity) {
            let weak = config.weak_fraction > 0.0 && rng.gen_bool(config.weak_fraction);
            draw_activity(truth.0, weak, config, alphabet, &mut rng)?
        } else {
            event.activity.clone()
        };
        activities.push(activity);

        let t = truth.1;
        if config.p_timestamp > 0.0 && rng.gen_bool(config.p_timestamp) {
            let weak = config.weak_fraction > 0.0 && rng.gen_bool(config.weak_fraction);
            if weak {
                // params fixed later; the placeholder is never observed
                pending_density.push((i, t));
                timestamps.push(UncertainTimestamp::WeakDensity(DensitySpec::gaussian(
                    0.0, 1.0,
                )?));
            } else {
                timestamps.push(UncertainTimestamp::interval(
                    Timestamp::new(t.instant() - halfwidth),
                    Timestamp::new(t.instant() + halfwidth),
                )?);
            }
        } else {
            timestamps.push(event.timestamp.clone());
        }

        let indeterminacy = if config.p_indeterminacy > 0.0 && rng.gen_bool(config.p_indeterminacy)
        {
            let weak = config.weak_fraction > 0.0 && rng.gen_bool(config.weak_fraction);
            if weak {
                UncertainIndeterminacy::weak(draw_positive(config.indeterminacy_cap, &mut rng))?
            } else {
                UncertainIndeterminacy::StrongIndeterminate
            }
        } else {
            UncertainIndeterminacy::Determinate
        };
        indeterminacies.push(indeterminacy);
    }

    // The injected trace's own axis: derived from the bounded timestamps
    // just decided, so later consumers resolve the density means the
    // same way.
    if !pending_density.is_empty() {
        let axis = axis_over(&timestamps);
        for &(i, t) in &pending_density {
            let mean = axis.to_days(t);
            let h = config.interval_halfwidth_days;
            timestamps[i] = UncertainTimestamp::WeakDensity(match config.density_kind {
                DensityKind::Gaussian => DensitySpec::gaussian(mean, h)?,
                DensityKind::Uniform => DensitySpec::uniform(mean - h, mean + h)?,
                DensityKind::Gamma => unreachable!("rejected by config check"),
            });
        }
    }

    let mut events = Vec::with_capacity(trace.events.len());
    for (((event, activity), timestamp), indeterminacy) in trace
        .events
        .iter()
        .zip(activities)
        .zip(timestamps)
        .zip(indeterminacies)
    {
        events.push(
            UncertainEvent::new(
                event.event_id.clone(),
                event.case_id.clone(),
                activity,
                timestamp,
                indeterminacy,
            )?
            .with_extra(event.extra.clone()),
        );
    }
    Ok(UncertainTrace {
        case_id: trace.case_id.clone(),
        events,
        attributes: trace.attributes.clone(),
    })
}

/// The certain label and time of an event already checked by
/// [`is_certain`].
fn certain_parts(event: &UncertainEvent) -> (&ActivityLabel, Timestamp) {
    let label = match &event.activity {
        UncertainActivity::StrongSet(set) => &set[0],
        UncertainActivity::WeakMap(_) => unreachable!("checked certain"),
    };
    let t = match event.timestamp {
        UncertainTimestamp::Certain(t) => t,
        _ => unreachable!("checked certain"),
    };
    (label, t)
}

fn draw_activity<R: Rng>(
    truth: &ActivityLabel,
    weak: bool,
    config: &InjectionConfig,
    alphabet: &[ActivityLabel],
    rng: &mut R,
) -> Result<UncertainActivity> {
    let candidates: Vec<&ActivityLabel> = alphabet.iter().filter(|l| *l != truth).collect();
    let picked = rand::seq::index::sample(rng, candidates.len(), config.k_labels);
    let decoys: Vec<&ActivityLabel> = picked.iter().map(|i| candidates[i]).collect();
    if weak {
        let dirichlet = Dirichlet::new_with_size(config.dirichlet_alpha, config.k_labels + 1)
            .map_err(|e| Error::InvalidConfig(format!("dirichlet_alpha: {e}")))?;
        let mut masses = dirichlet.sample(rng);
        // largest mass to the true label, listed first
        masses.sort_by(|a, b| b.total_cmp(a));
        let entries = std::iter::once(truth)
            .chain(decoys)
            .zip(masses)
            .map(|(l, m)| (l.clone(), m.max(1e-12)));
        UncertainActivity::weak_map(entries)
    } else {
        UncertainActivity::strong_set(
            std::iter::once(truth.clone()).chain(decoys.into_iter().cloned()),
        )
    }
}

/// Uniform draw from `(0, cap]`; rejects the measure-zero exact 0 so the
/// result is a valid probability.
fn draw_positive<R: Rng>(cap: f64, rng: &mut R) -> f64 {
    loop {
        let p = rng.gen_range(0.0..cap);
        if p > 0.0 {
            return p;
        }
    }
}

/// Mirrors [`TimeAxis::for_trace`] over bare timestamps.
fn axis_over(timestamps: &[UncertainTimestamp]) -> TimeAxis {
    let earliest = timestamps.iter().filter_map(|t| t.earliest_certain_bound()).min();
    match earliest {
        Some(t) => TimeAxis::anchored_at(t),
        None => TimeAxis::default(),
    }
}

/// How much uncertainty an injection introduced, per annotation aspect.
#[derive(Clone, Copy, Debug, Default, PartialEq, serde::Serialize)]
pub struct AspectDelta {
    /// Newly strong-annotated events (may be negative for odd inputs).
    pub strong: i64,
    /// Newly weak-annotated events.
    pub weak: i64,
    /// Fraction of all events that gained this aspect.
    pub rate: f64,
}

impl AspectDelta {
    fn from_counts(before: (usize, usize), after: (usize, usize), events: usize) -> AspectDelta {
        let strong = after.0 as i64 - before.0 as i64;
        let weak = after.1 as i64 - before.1 as i64;
        AspectDelta {
            strong,
            weak,
            rate: if events == 0 {
                0.0
            } else {
                (strong + weak) as f64 / events as f64
            },
        }
    }
}

/// Before/after comparison of an injection run.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct InjectionReport {
    pub events: usize,
    pub activity: AspectDelta,
    pub timestamp: AspectDelta,
    pub indeterminacy: AspectDelta,
    pub before: StatsSummary,
    pub after: StatsSummary,
}

/// Summarizes what [`inject`] did by comparing its input and output,
/// which must describe the same traces and events in the same order
/// ([`Error::IdMismatch`] otherwise). The per-aspect rates estimate the
/// configured probabilities.
pub fn injection_report(before: &UncertainLog, after: &UncertainLog) -> Result<InjectionReport> {
    if before.traces.len() != after.traces.len() {
        return Err(Error::IdMismatch(format!(
            "{} traces vs {}",
            before.traces.len(),
            after.traces.len()
        )));
    }
    for (b, a) in before.traces.iter().zip(&after.traces) {
        if b.case_id != a.case_id {
            return Err(Error::IdMismatch(format!(
                "case {:?} vs {:?}",
                b.case_id, a.case_id
            )));
        }
        if b.events.len() != a.events.len() {
            return Err(Error::IdMismatch(format!(
                "case {:?} has {} events vs {}",
                b.case_id,
                b.events.len(),
                a.events.len()
            )));
        }
        for (eb, ea) in b.events.iter().zip(&a.events) {
            if eb.event_id != ea.event_id {
                return Err(Error::IdMismatch(format!(
                    "case {:?}: event {:?} vs {:?}",
                    b.case_id, eb.event_id, ea.event_id
                )));
            }
        }
    }
    let b = uncertainty_stats(before);
    let a = uncertainty_stats(after);
    let events = b.events;
    Ok(InjectionReport {
        events,
        activity: AspectDelta::from_counts(
            (b.strong_activity, b.weak_activity),
            (a.strong_activity, a.weak_activity),
            events,
        ),
        timestamp: AspectDelta::from_counts(
            (b.strong_timestamp, b.weak_timestamp),
            (a.strong_timestamp, a.weak_timestamp),
            events,
        ),
        indeterminacy: AspectDelta::from_counts(
            (b.strong_indeterminacy, b.weak_indeterminacy),
            (a.strong_indeterminacy, a.weak_indeterminacy),
            events,
        ),
        before: b,
        after: a,
    })
}
