//! Cross-cutting invariants tying sampling, enumeration, and injection
//! together: every draw is an enumerable shape, draw frequencies
//! converge to the computed weights, and injected noise survives the
//! wire unchanged.

mod common;

use std::collections::{HashMap, HashSet};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use uxes::inject::{inject, InjectionConfig};
use uxes::model::DensityKind;
use uxes::realize::sample::{sample_realizations, Realization, SampleOptions};
use uxes::realize::{
    enumerate_realizations, realization_probability, EnumerateOptions, Mode, ProbabilityOptions,
    RealizationShape,
};
use uxes::validate::validate_log;
use uxes::xes::{log_to_string, read_str, WriteOptions};

const LISTING_STRONG: &str = include_str!("data/healthcare_strong.xes");

fn shape_of(realization: &Realization) -> RealizationShape {
    RealizationShape::new(
        realization
            .steps
            .iter()
            .map(|s| (s.event_id.clone(), s.activity.clone())),
    )
}

/// Whatever the sampler draws, the enumerator could have listed.
#[test]
fn sampled_shapes_are_enumerable() {
    let enumerate = EnumerateOptions::default();
    let sample = SampleOptions {
        mode: Some(Mode::Uniform),
        ..Default::default()
    };

    let mut config = Config::with_cases(100);
    config.failure_persistence = None;
    let mut runner = TestRunner::new(config);
    runner
        .run(&any::<u64>(), |seed| {
            let trace = common::random_enumeration_trace(seed);
            let admissible: HashSet<RealizationShape> = enumerate_realizations(&trace, &enumerate)
                .unwrap()
                .into_iter()
                .collect();
            for draw in sample_realizations(&trace, 64, seed ^ 0x00c0_ffee, &sample).unwrap() {
                let shape = shape_of(&draw);
                assert!(
                    admissible.contains(&shape),
                    "seed {seed}: sampled {shape:?}, which enumeration never lists"
                );
            }
            Ok(())
        })
        .unwrap();
}

/// Draw frequencies on the strong listing converge to the computed
/// uniform-mode weights: each of the ten shapes lands within three
/// binomial standard deviations at 100k draws, and nothing outside the
/// enumerated set is ever drawn.
#[test]
fn sampling_frequencies_match_computed_weights() {
    let log = read_str(LISTING_STRONG).unwrap();
    let trace = &log.traces[0];

    let shapes = enumerate_realizations(trace, &EnumerateOptions::default()).unwrap();
    assert_eq!(shapes.len(), 10);
    let probability_options = ProbabilityOptions::with_mode(Mode::Uniform);
    let weights: Vec<(RealizationShape, f64, f64)> = shapes
        .into_iter()
        .map(|shape| {
            let computed = realization_probability(trace, &shape, &probability_options).unwrap();
            (shape, computed.probability, computed.std_error.unwrap_or(0.0))
        })
        .collect();
    let total: f64 = weights.iter().map(|(_, p, _)| p).sum();
    assert!((total - 1.0).abs() <= 1e-9, "weights total {total}");

    let n = 100_000u64;
    let draws = sample_realizations(
        trace,
        n,
        99,
        &SampleOptions {
            mode: Some(Mode::Uniform),
            ..Default::default()
        },
    )
    .unwrap();
    let mut counts: HashMap<RealizationShape, u64> = HashMap::new();
    for draw in &draws {
        *counts.entry(shape_of(draw)).or_default() += 1;
    }

    let listed: HashSet<&RealizationShape> = weights.iter().map(|(s, _, _)| s).collect();
    for shape in counts.keys() {
        assert!(listed.contains(shape), "drew an unlisted shape: {shape:?}");
    }

    for (shape, p, reference_se) in &weights {
        let drawn = counts.get(shape).copied().unwrap_or(0);
        assert!(drawn > 0, "shape {shape:?} (weight {p:.4}) never drawn in {n} draws");
        let observed = drawn as f64 / n as f64;
        // Allow for sampling noise plus any noise in the reference
        // weight itself (zero here: the order factors are exact).
        let slack = 3.0 * ((p * (1.0 - p) / n as f64).sqrt() + reference_se);
        assert!(
            (observed - p).abs() <= slack,
            "shape {shape:?}: observed {observed:.4}, computed {p:.4}, slack {slack:.4}"
        );
    }
}

/// Injected noise survives the wire: the result validates clean, parse
/// then serialize is the identity from the first parse on, and every
/// uncertainty annotation crosses unchanged even though event ids may
/// be resynthesized.
#[test]
fn injected_logs_survive_the_wire() {
    let mut config = Config::with_cases(60);
    config.failure_persistence = None;
    let mut runner = TestRunner::new(config);
    runner
        .run(&any::<u64>(), |seed| {
            let mut rng = StdRng::seed_from_u64(seed);
            let k_labels = rng.gen_range(1..=3usize);
            // k extra labels need k decoys, so give the log at least
            // k_labels + 1 distinct activities.
            let traces = rng.gen_range(1..=4usize);
            let events = rng.gen_range(k_labels + 1..=6usize);
            let base = common::certain_log(traces, events);
            let config = InjectionConfig {
                p_activity: rng.gen_range(0.0..=1.0),
                k_labels,
                p_timestamp: rng.gen_range(0.0..=1.0),
                interval_halfwidth_days: rng.gen_range(0.25..3.0),
                p_indeterminacy: rng.gen_range(0.0..=1.0),
                weak_fraction: rng.gen_range(0.0..=1.0),
                dirichlet_alpha: rng.gen_range(0.5..4.0),
                density_kind: if rng.gen_bool(0.5) {
                    DensityKind::Gaussian
                } else {
                    DensityKind::Uniform
                },
                indeterminacy_cap: rng.gen_range(0.05..=1.0),
                seed: rng.gen(),
            };

            let noisy = inject(&base, &config).unwrap();
            assert!(
                validate_log(&noisy).is_clean(),
                "seed {seed}: injection produced an invalid log"
            );

            let first =
                read_str(&log_to_string(&noisy, &WriteOptions::default()).unwrap()).unwrap();
            assert!(validate_log(&first).is_clean(), "seed {seed}");
            let second =
                read_str(&log_to_string(&first, &WriteOptions::default()).unwrap()).unwrap();
            assert_eq!(first, second, "seed {seed}");

            // The wire may rename events, but never touches annotations.
            assert_eq!(first.traces.len(), noisy.traces.len());
            for (sent, received) in noisy.traces.iter().zip(&first.traces) {
                assert_eq!(sent.case_id, received.case_id);
                assert_eq!(sent.events.len(), received.events.len());
                for (x, y) in sent.events.iter().zip(&received.events) {
                    assert_eq!(x.activity, y.activity, "seed {seed}");
                    assert_eq!(x.timestamp, y.timestamp, "seed {seed}");
                    assert_eq!(x.indeterminacy, y.indeterminacy, "seed {seed}");
                }
            }
            Ok(())
        })
        .unwrap();
}
