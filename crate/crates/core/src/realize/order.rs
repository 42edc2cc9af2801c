//! Probability that independently-timed events fall in a given order.
//!
//! Each event's timestamp is a point, a uniform interval, or a named
//! density on the day axis. For point/interval mixes the order
//! probability has an exact value, computed here by dynamic programming;
//! with densities present it is estimated by Monte Carlo with a reported
//! standard error.
//!
//! Ties: the order relation is total, comparing `(time, event_id)`
//! lexicographically. Ties between continuous draws have measure zero,
//! so the id rule only decides sequences of events pinned to the same
//! point in time.

use rand::distributions::{Distribution, Uniform as UniformDist};
use rand::Rng;
use rand_distr::{Gamma as GammaDist, Normal as NormalDist};

use crate::axis::TimeAxis;
use crate::model::{DensitySpec, UncertainTimestamp};

/// An event's timestamp reduced to a distribution on the day axis.
#[derive(Clone, Debug, PartialEq)]
pub enum TimeModel {
    /// The timestamp is known exactly.
    Point(f64),
    /// Uniformly distributed over `[lo, hi]`, `lo < hi`.
    Interval { lo: f64, hi: f64 },
    Density(DensitySpec),
}

impl TimeModel {
    /// Maps an uncertain timestamp onto the axis. Interval bounds are
    /// normalized; a degenerate interval becomes a point.
    pub fn from_timestamp(timestamp: &UncertainTimestamp, axis: &TimeAxis) -> TimeModel {
        match timestamp {
            UncertainTimestamp::Certain(t) => TimeModel::Point(axis.to_days(*t)),
            UncertainTimestamp::StrongInterval { min, max } => {
                let (a, b) = (axis.to_days(*min), axis.to_days(*max));
                let (lo, hi) = (a.min(b), a.max(b));
                if lo == hi {
                    TimeModel::Point(lo)
                } else {
                    TimeModel::Interval { lo, hi }
                }
            }
            UncertainTimestamp::WeakDensity(spec) => TimeModel::Density(spec.clone()),
        }
    }

    pub fn is_density(&self) -> bool {
        matches!(self, TimeModel::Density(_))
    }

    /// Support bounds (used for feasibility; densities may be unbounded).
    pub fn support(&self) -> (f64, f64) {
        match self {
            TimeModel::Point(p) => (*p, *p),
            TimeModel::Interval { lo, hi } => (*lo, *hi),
            TimeModel::Density(DensitySpec::Gaussian { .. }) => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            TimeModel::Density(DensitySpec::Uniform { low, high }) => (*low, *high),
            TimeModel::Density(DensitySpec::Gamma { .. }) => (0.0, f64::INFINITY),
        }
    }

    /// Draws one time.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> f64 {
        match self {
            TimeModel::Point(p) => *p,
            TimeModel::Interval { lo, hi } => UniformDist::new(*lo, *hi).sample(rng),
            TimeModel::Density(DensitySpec::Gaussian { mean, stddev }) => {
                NormalDist::new(*mean, *stddev).expect("validated params").sample(rng)
            }
            TimeModel::Density(DensitySpec::Uniform { low, high }) => {
                UniformDist::new(*low, *high).sample(rng)
            }
            TimeModel::Density(DensitySpec::Gamma { shape, scale }) => {
                GammaDist::new(*shape, *scale).expect("validated params").sample(rng)
            }
        }
    }
}

/// One event in a candidate sequence: its time model plus the id used to
/// break ties.
pub struct SeqItem<'a> {
    pub model: &'a TimeModel,
    pub id: &'a str,
}

/// Whether some assignment of times within the support bounds realizes
/// the sequence: greedily take each event as early as allowed and check
/// it still fits under its upper bound (weak inequalities throughout).
pub fn feasible(items: &[SeqItem<'_>]) -> bool {
    let mut t = f64::NEG_INFINITY;
    for item in items {
        let (lo, hi) = item.model.support();
        t = t.max(lo);
        if t > hi {
            return false;
        }
    }
    true
}

/// Exact probability that the events occur in exactly this sequence,
/// under independent uniform draws. All models must be points or
/// intervals.
///
/// The sequence splits at its points into independent segments; within
/// one segment, the interval-valued events form an order polytope whose
/// volume is summed cell by cell: each assignment of events to the cells
/// between support breakpoints (non-decreasing, each cell inside the
/// event's support) contributes the product of cell-width densities, and
/// a run of `r` events sharing one cell is ascending with probability
/// `1/r!`.
pub fn exact_order_probability(items: &[SeqItem<'_>]) -> f64 {
    debug_assert!(items.iter().all(|i| !i.model.is_density()));
    let mut probability = 1.0;
    let mut run: Vec<(f64, f64)> = Vec::new();
    // previous point's value and id; the flag says whether the point is
    // immediately adjacent (no interval between)
    let mut lower = f64::NEG_INFINITY;
    let mut prev_id: Option<&str> = None;

    for item in items {
        match *item.model {
            TimeModel::Point(p) => {
                if p < lower {
                    return 0.0;
                }
                if p == lower {
                    if !run.is_empty() {
                        // an interval event squeezed between two equal
                        // points has no room
                        return 0.0;
                    }
                    if let Some(prev) = prev_id {
                        // simultaneous points: the canonical sequence
                        // orders them by id
                        if prev >= item.id {
                            return 0.0;
                        }
                    }
                }
                probability *= segment_probability(&run, lower, p);
                if probability == 0.0 {
                    return 0.0;
                }
                run.clear();
                lower = p;
                prev_id = Some(item.id);
            }
            TimeModel::Interval { lo, hi } => {
                run.push((lo, hi));
                prev_id = None;
            }
            TimeModel::Density(_) => unreachable!("density passed to exact computation"),
        }
    }
    probability * segment_probability(&run, lower, f64::INFINITY)
}

/// Probability that independent uniforms fall in ascending order inside
/// `(a, b)`, each within its own support.
fn segment_probability(supports: &[(f64, f64)], a: f64, b: f64) -> f64 {
    if supports.is_empty() {
        return 1.0;
    }
    // clip supports to the segment; remember original widths for density
    let mut clipped = Vec::with_capacity(supports.len());
    for &(lo, hi) in supports {
        let s = (lo.max(a), hi.min(b));
        if s.0 >= s.1 {
            return 0.0;
        }
        clipped.push((s.0, s.1, hi - lo));
    }
    // cell boundaries: every clipped support endpoint
    let mut bounds: Vec<f64> = clipped.iter().flat_map(|&(lo, hi, _)| [lo, hi]).collect();
    bounds.sort_by(f64::total_cmp);
    bounds.dedup();
    let cells: Vec<(f64, f64)> = bounds.windows(2).map(|w| (w[0], w[1])).collect();
    let in_cell =
        |var: usize, cell: usize| clipped[var].0 <= cells[cell].0 && cells[cell].1 <= clipped[var].1;
    let width = |cell: usize| cells[cell].1 - cells[cell].0;

    // dp[cell][run_len] = summed contribution of prefixes whose last
    // event sits in `cell` as the `run_len`-th consecutive one there
    let n = clipped.len();
    let mut dp = vec![vec![0.0f64; n + 1]; cells.len()];
    for (c, row) in dp.iter_mut().enumerate() {
        if in_cell(0, c) {
            row[1] = width(c) / clipped[0].2;
        }
    }
    for (var, &(_, _, len)) in clipped.iter().enumerate().skip(1) {
        let mut next = vec![vec![0.0f64; n + 1]; cells.len()];
        for c in 0..cells.len() {
            for r in 1..=var {
                let v = dp[c][r];
                if v == 0.0 {
                    continue;
                }
                if in_cell(var, c) {
                    // join the run in this cell: ascending order within a
                    // run of r+1 costs the factorial increment 1/(r+1)
                    next[c][r + 1] += v * width(c) / len / (r + 1) as f64;
                }
                for c2 in c + 1..cells.len() {
                    if in_cell(var, c2) {
                        next[c2][1] += v * width(c2) / len;
                    }
                }
            }
        }
        dp = next;
    }
    dp.iter().flatten().sum()
}

/// Monte Carlo estimate of the sequence probability, usable with any
/// time models. Returns the estimate and its standard error.
pub fn mc_order_probability<R: Rng>(items: &[SeqItem<'_>], samples: u64, rng: &mut R) -> (f64, f64) {
    if items.len() <= 1 {
        return (1.0, 0.0);
    }
    let mut hits = 0u64;
    let mut times = vec![0.0f64; items.len()];
    for _ in 0..samples {
        for (t, item) in times.iter_mut().zip(items) {
            *t = item.model.sample(rng);
        }
        let ordered = times.windows(2).enumerate().all(|(i, w)| {
            w[0] < w[1] || (w[0] == w[1] && items[i].id < items[i + 1].id)
        });
        if ordered {
            hits += 1;
        }
    }
    let p = hits as f64 / samples as f64;
    let se = (p * (1.0 - p) / samples as f64).sqrt();
    (p, se)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn item<'a>(model: &'a TimeModel, id: &'a str) -> SeqItem<'a> {
        SeqItem { model, id }
    }

    #[test]
    fn forced_orders_have_probability_one() {
        let a = TimeModel::Point(1.0);
        let b = TimeModel::Point(2.0);
        assert_eq!(exact_order_probability(&[item(&a, "e1"), item(&b, "e2")]), 1.0);
        assert_eq!(exact_order_probability(&[item(&b, "e2"), item(&a, "e1")]), 0.0);
    }

    #[test]
    fn simultaneous_points_follow_id_order() {
        let a = TimeModel::Point(5.0);
        let b = TimeModel::Point(5.0);
        assert_eq!(exact_order_probability(&[item(&a, "e1"), item(&b, "e2")]), 1.0);
        assert_eq!(exact_order_probability(&[item(&b, "e2"), item(&a, "e1")]), 0.0);
    }

    #[test]
    fn two_nested_intervals() {
        // P(X < Y), X ~ U[0,1], Y ~ U[0,2]
        let x = TimeModel::Interval { lo: 0.0, hi: 1.0 };
        let y = TimeModel::Interval { lo: 0.0, hi: 2.0 };
        let p = exact_order_probability(&[item(&x, "e1"), item(&y, "e2")]);
        assert!((p - 0.75).abs() < 1e-12);
        let q = exact_order_probability(&[item(&y, "e2"), item(&x, "e1")]);
        assert!((q - 0.25).abs() < 1e-12);
    }

    #[test]
    fn identical_intervals_split_evenly() {
        let x = TimeModel::Interval { lo: 0.0, hi: 1.0 };
        let y = TimeModel::Interval { lo: 0.0, hi: 1.0 };
        let p = exact_order_probability(&[item(&x, "e1"), item(&y, "e2")]);
        assert!((p - 0.5).abs() < 1e-12);
    }

    #[test]
    fn three_iid_intervals_use_factorial() {
        let m = TimeModel::Interval { lo: 0.0, hi: 1.0 };
        let p = exact_order_probability(&[item(&m, "e1"), item(&m, "e2"), item(&m, "e3")]);
        assert!((p - 1.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn interval_split_by_point() {
        // X ~ U[4,10] against a point at 5: before with mass 1/6, after 5/6
        let x = TimeModel::Interval { lo: 4.0, hi: 10.0 };
        let p = TimeModel::Point(5.0);
        let before = exact_order_probability(&[item(&x, "e3"), item(&p, "e1")]);
        let after = exact_order_probability(&[item(&p, "e1"), item(&x, "e3")]);
        assert!((before - 1.0 / 6.0).abs() < 1e-12);
        assert!((after - 5.0 / 6.0).abs() < 1e-12);
    }

    #[test]
    fn orders_of_one_trace_sum_to_one() {
        // two points at 5 and 8, one interval over [4,10]
        let p1 = TimeModel::Point(5.0);
        let p2 = TimeModel::Point(8.0);
        let x = TimeModel::Interval { lo: 4.0, hi: 10.0 };
        let orders = [
            vec![item(&x, "e3"), item(&p1, "e1"), item(&p2, "e2")],
            vec![item(&p1, "e1"), item(&x, "e3"), item(&p2, "e2")],
            vec![item(&p1, "e1"), item(&p2, "e2"), item(&x, "e3")],
        ];
        let probs: Vec<f64> = orders.iter().map(|o| exact_order_probability(o)).collect();
        assert!((probs[0] - 1.0 / 6.0).abs() < 1e-12);
        assert!((probs[1] - 1.0 / 2.0).abs() < 1e-12);
        assert!((probs[2] - 1.0 / 3.0).abs() < 1e-12);
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interval_between_equal_points_is_impossible() {
        let p = TimeModel::Point(5.0);
        let x = TimeModel::Interval { lo: 0.0, hi: 10.0 };
        let p2 = TimeModel::Point(5.0);
        assert_eq!(
            exact_order_probability(&[item(&p, "e1"), item(&x, "e2"), item(&p2, "e3")]),
            0.0
        );
    }

    #[test]
    fn feasibility_follows_greedy_rule() {
        let a = TimeModel::Interval { lo: 1.0, hi: 2.0 };
        let b = TimeModel::Interval { lo: 5.0, hi: 6.0 };
        assert!(feasible(&[item(&a, "e1"), item(&b, "e2")]));
        assert!(!feasible(&[item(&b, "e2"), item(&a, "e1")]));
        // boundary touch counts as feasible
        let c = TimeModel::Point(2.0);
        assert!(feasible(&[item(&a, "e1"), item(&c, "e2")]));
        assert!(feasible(&[item(&c, "e2"), item(&a, "e1")]));
    }

    #[test]
    fn mc_agrees_with_exact_on_intervals() {
        let x = TimeModel::Interval { lo: 0.0, hi: 1.0 };
        let y = TimeModel::Interval { lo: 0.0, hi: 2.0 };
        let items = [item(&x, "e1"), item(&y, "e2")];
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(7);
        let (p, se) = mc_order_probability(&items, 200_000, &mut rng);
        assert!((p - 0.75).abs() < 4.0 * se, "p={p} se={se}");
    }

    #[test]
    fn mc_gaussian_tail() {
        // P(X > 8), X ~ N(7,1): one minus the CDF at one sigma
        let p8 = TimeModel::Point(8.0);
        let x = TimeModel::Density(DensitySpec::Gaussian { mean: 7.0, stddev: 1.0 });
        let items = [item(&p8, "e5"), item(&x, "e6")];
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(11);
        let (p, se) = mc_order_probability(&items, 400_000, &mut rng);
        assert!((p - 0.158_655).abs() < 4.0 * se, "p={p} se={se}");
    }
}
