//! Estimating `F` at the breakpoints that matter from purchase frequencies.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::learning::simulator::BuyerSimulator;
use crate::subset::ItemSet;

/// Where a CDF value was estimated: an item meeting the zero line, or two
/// item lines meeting each other (smaller id first).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CrossingKey {
    Axis(usize),
    Pair(usize, usize),
}

impl CrossingKey {
    pub fn pair(a: usize, b: usize) -> Self {
        CrossingKey::Pair(a.min(b), a.max(b))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub cdf: f64,
    pub samples: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CrossingEstimates {
    pub n: usize,
    pub estimates: BTreeMap<CrossingKey, Estimate>,
    pub epsilon: f64,
    pub epsilon0: f64,
}

impl CrossingEstimates {
    pub fn new(n: usize, epsilon: f64, epsilon0: f64) -> Self {
        CrossingEstimates { n, estimates: BTreeMap::new(), epsilon, epsilon0 }
    }

    pub fn get(&self, key: CrossingKey) -> Option<f64> {
        self.estimates.get(&key).map(|e| e.cdf)
    }

    /// Folds in one observation of `key`, averaging by sample count.
    pub fn record(&mut self, key: CrossingKey, cdf: f64, samples: usize) {
        let e = self.estimates.entry(key).or_insert(Estimate { cdf: 0.0, samples: 0 });
        let total = e.samples + samples;
        if total > 0 {
            e.cdf = (e.cdf * e.samples as f64 + cdf * samples as f64) / total as f64;
        }
        e.samples = total;
    }

    pub fn merge(mut self, other: &CrossingEstimates) -> Self {
        for (&key, e) in &other.estimates {
            self.record(key, e.cdf, e.samples);
        }
        self
    }

    pub fn axis(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.estimates.iter().filter_map(|(k, e)| match *k {
            CrossingKey::Axis(i) => Some((i, e.cdf)),
            _ => None,
        })
    }

    pub fn pairs(&self) -> impl Iterator<Item = ((usize, usize), f64)> + '_ {
        self.estimates.iter().filter_map(|(k, e)| match *k {
            CrossingKey::Pair(a, b) => Some(((a, b), e.cdf)),
            _ => None,
        })
    }
}

fn check_samples(samples: usize) -> Result<()> {
    if samples == 0 {
        return Err(Error::Precondition("need at least one sample per query set".into()));
    }
    Ok(())
}

/// Shows each item alone; the no-purchase frequency estimates `F(p_i / v_i)`.
pub fn estimate_axis_crossings(sim: &mut BuyerSimulator, samples_per_item: usize) -> Result<CrossingEstimates> {
    check_samples(samples_per_item)?;
    let n = sim.n();
    let mut out = CrossingEstimates::new(n, 0.0, 0.0);
    for i in 0..n {
        let mut nothing = 0usize;
        for _ in 0..samples_per_item {
            if sim.query(ItemSet::singleton(i))?.is_empty() {
                nothing += 1;
            }
        }
        out.record(CrossingKey::Axis(i), nothing as f64 / samples_per_item as f64, samples_per_item);
    }
    Ok(out)
}

/// Estimates for one displayed set of size `k + 1`: keys along its loser sequence.
///
/// Once `k` displayed lines are positive the buyer takes all but the lowest
/// one. The lowest line of a set has decreasing slope as `w` grows, and two
/// consecutive losers meet at a positive `w`, so the loser sequence is the
/// order of decreasing price among items that were ever left out.
pub fn loser_sequence_keys(
    shown: ItemSet,
    prices: &[f64],
    fewer: f64,
    left_out: &BTreeMap<usize, f64>,
) -> Vec<(CrossingKey, f64)> {
    let mut seq: Vec<(usize, f64)> =
        shown.iter().filter_map(|i| left_out.get(&i).filter(|&&x| x > 0.0).map(|&x| (i, x))).collect();
    seq.sort_by(|a, b| prices[b.0].total_cmp(&prices[a.0]).then(a.0.cmp(&b.0)));
    let mut out = Vec::new();
    let mut cum = fewer;
    for pair in seq.windows(2) {
        cum += pair[0].1;
        out.push((CrossingKey::pair(pair[0].0, pair[1].0), cum.min(1.0)));
    }
    out
}

/// Shows every set of `k + 1` items and reads crossing CDFs off the
/// frequencies of each `k`-item purchase.
pub fn estimate_pair_crossings(
    sim: &mut BuyerSimulator,
    k: usize,
    samples_per_set: usize,
) -> Result<CrossingEstimates> {
    check_samples(samples_per_set)?;
    if k == 0 {
        return Err(Error::Precondition("k must be at least 1".into()));
    }
    let n = sim.n();
    let prices = sim.prices();
    let mut out = CrossingEstimates::new(n, 0.0, 0.0);
    let s = samples_per_set as f64;
    for shown in ItemSet::full(n).subsets().filter(|t| t.len() == k + 1) {
        let mut fewer = 0usize;
        let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
        for _ in 0..samples_per_set {
            let bought = sim.query(shown)?;
            if bought.len() < k {
                fewer += 1;
            } else if bought.len() == k {
                let missing = shown.difference(bought).iter().next().expect("one item left out");
                *counts.entry(missing).or_default() += 1;
            }
        }
        let left_out: BTreeMap<usize, f64> = counts.into_iter().map(|(i, c)| (i, c as f64 / s)).collect();
        for (key, cdf) in loser_sequence_keys(shown, &prices, fewer as f64 / s, &left_out) {
            out.record(key, cdf, samples_per_set);
        }
    }
    Ok(out)
}
