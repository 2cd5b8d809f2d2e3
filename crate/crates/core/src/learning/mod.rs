//! Learning an assortment from demand queries alone.
//!
//! The learner sees prices but neither values nor `F`. It shows single items
//! to estimate where each line meets zero, shows every set of `k + 1` items to
//! estimate where lines meet each other, and then runs the sweep on those
//! estimates in place of the true CDF.

mod estimate;
mod simulator;

pub use estimate::{
    estimate_axis_crossings, estimate_pair_crossings, loser_sequence_keys, CrossingEstimates, CrossingKey, Estimate,
};
pub use simulator::{BuyerSimulator, QueryRecord};

use crate::dp::{sweep, SweepEvent, SweepInput, MAX_LINES};
use crate::error::{Error, Result};
use crate::subset::ItemSet;

/// Default constant in the per-set sample budget.
pub const DEFAULT_C0: f64 = 8.0;

/// `ceil(c0 * ln(n) / eps^2)`, at least one.
pub fn sample_budget(n: usize, epsilon: f64, c0: f64) -> Result<usize> {
    if !(epsilon > 0.0 && epsilon <= 1.0) || !(c0 > 0.0) {
        return Err(Error::Precondition(format!("need 0 < epsilon <= 1 and c0 > 0, got {epsilon}, {c0}")));
    }
    let s = (c0 * (n.max(1) as f64).ln() / (epsilon * epsilon)).ceil();
    Ok((s as usize).max(1))
}

/// Number of queries the two procedures spend: `n s1 + C(n, k+1) s2`.
pub fn total_queries(n: usize, k: usize, s1: usize, s2: usize) -> usize {
    n * s1 + binomial(n, k + 1) * s2
}

pub fn binomial(n: usize, r: usize) -> usize {
    if r > n {
        return 0;
    }
    (0..r.min(n - r)).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug, PartialEq)]
pub struct LearnedSolution {
    pub assortment: ItemSet,
    /// Expected revenue under the estimated CDF values.
    pub estimated_value: f64,
    pub states_visited: usize,
    pub events: usize,
}

/// Runs the sweep with estimated CDF values. Line order and swap directions
/// come from prices alone: just right of zero cheaper lines sit higher, and
/// of two lines meeting at a positive type the pricier one rises.
pub fn dp_from_samples(
    estimates: &CrossingEstimates,
    prices: &[f64],
    k: usize,
    ell: Option<usize>,
) -> Result<LearnedSolution> {
    let n = prices.len();
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    if n == 0 {
        return Ok(LearnedSolution {
            assortment: ItemSet::default(),
            estimated_value: 0.0,
            states_visited: 0,
            events: 0,
        });
    }
    let k = k.min(n);
    let pad = 2 * k - 1;
    if pad + n > MAX_LINES {
        return Err(Error::Precondition(format!("at most {MAX_LINES} lines including padding")));
    }
    let line_of = |i: usize| pad + i;

    let mut keyed: Vec<(f64, CrossingKey, Vec<(usize, usize)>)> = Vec::new();
    for i in 0..n {
        let cdf = estimates
            .get(CrossingKey::Axis(i))
            .ok_or_else(|| Error::InsufficientCoverage(format!("no zero-crossing estimate for item {i}")))?;
        // The item climbs through the padding block from its bottom line up.
        let swaps = (0..pad).rev().map(|z| (line_of(i), z)).collect();
        keyed.push((cdf, CrossingKey::Axis(i), swaps));
    }
    for ((a, b), cdf) in estimates.pairs() {
        if a >= n || b >= n {
            return Err(Error::InsufficientCoverage(format!("estimate for unknown pair ({a}, {b})")));
        }
        let (up, down) = if prices[a] > prices[b] || (prices[a] == prices[b] && a > b) { (a, b) } else { (b, a) };
        keyed.push((cdf, CrossingKey::Pair(a, b), vec![(line_of(up), line_of(down))]));
    }
    keyed.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    let events: Vec<SweepEvent<f64>> = keyed
        .iter()
        .flat_map(|(cdf, _, swaps)| swaps.iter().map(move |&(up, down)| SweepEvent { up, down, cdf_left: *cdf }))
        .collect();

    let mut initial: Vec<usize> = (0..pad).collect();
    let mut items: Vec<usize> = (0..n).collect();
    items.sort_by(|&a, &b| prices[a].total_cmp(&prices[b]).then(a.cmp(&b)));
    initial.extend(items.into_iter().map(line_of));

    let input = SweepInput { num_lines: pad + n, k, initial_order: &initial, events: &events };
    let res = sweep(&input, ell, |mask| {
        (pad..pad + n).filter(|&x| mask >> x & 1 == 1).map(|x| prices[x - pad]).sum::<f64>()
    })?;
    let assortment = (pad..pad + n).filter(|&x| res.lines >> x & 1 == 1).map(|x| x - pad).collect();
    Ok(LearnedSolution {
        assortment,
        estimated_value: res.value,
        states_visited: res.states_visited,
        events: events.len(),
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LearnConfig {
    pub k: usize,
    pub epsilon: f64,
    pub epsilon0: f64,
    pub c0: f64,
    pub ell: Option<usize>,
}

impl LearnConfig {
    pub fn new(k: usize, epsilon: f64) -> Self {
        LearnConfig { k, epsilon, epsilon0: epsilon, c0: DEFAULT_C0, ell: None }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct LearnOutcome {
    pub assortment: ItemSet,
    pub estimated_value: f64,
    pub queries_used: usize,
    pub samples_per_item: usize,
    pub samples_per_set: usize,
    pub estimates: CrossingEstimates,
}

/// Both sampling phases followed by the sweep.
pub fn learn_assortment(sim: &mut BuyerSimulator, cfg: &LearnConfig) -> Result<LearnOutcome> {
    if cfg.epsilon > cfg.epsilon0 {
        return Err(Error::Precondition(format!(
            "accuracy {} must not exceed the separation {}",
            cfg.epsilon, cfg.epsilon0
        )));
    }
    let n = sim.n();
    let s = sample_budget(n, cfg.epsilon, cfg.c0)?;
    let before = sim.queries();
    let axis = estimate_axis_crossings(sim, s)?;
    let pairs = estimate_pair_crossings(sim, cfg.k, s)?;
    let mut estimates = axis.merge(&pairs);
    estimates.epsilon = cfg.epsilon;
    estimates.epsilon0 = cfg.epsilon0;
    log::debug!("learning: {s} samples per query set, {} crossing estimates", estimates.estimates.len());
    let sol = dp_from_samples(&estimates, &sim.prices(), cfg.k, cfg.ell)?;
    Ok(LearnOutcome {
        assortment: sol.assortment,
        estimated_value: sol.estimated_value,
        queries_used: sim.queries() - before,
        samples_per_item: s,
        samples_per_set: s,
        estimates,
    })
}

/// Best of all nonempty assortments of at most `k` items by average paid
/// price over `samples_per_set` queries each.
pub fn learn_concave(sim: &mut BuyerSimulator, k: usize, samples_per_set: usize) -> Result<(ItemSet, f64)> {
    if samples_per_set == 0 {
        return Err(Error::Precondition("need at least one sample per query set".into()));
    }
    let prices = sim.prices();
    let mut best = (ItemSet::default(), 0.0f64);
    for shown in ItemSet::full(sim.n()).subsets_up_to(k) {
        if shown.is_empty() {
            continue;
        }
        let mut paid = 0.0;
        for _ in 0..samples_per_set {
            paid += sim.query(shown)?.iter().map(|i| prices[i]).sum::<f64>();
        }
        let avg = paid / samples_per_set as f64;
        if avg > best.1 {
            best = (shown, avg);
        }
    }
    Ok(best)
}
