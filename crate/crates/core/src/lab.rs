//! Instance generators: random k-demand instances in general position, the
//! greedy-failure family, the knapsack reduction and well-priced repricing.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{Instance, TypeDistribution, Valuation};
use crate::subset::ItemSet;

const MAX_REJECTIONS: usize = 10_000;
const POSITION_GAP: f64 = 1e-9;

fn check_range(name: &str, (lo, hi): (f64, f64)) -> Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi && lo >= 0.0) {
        return Err(Error::Precondition(format!("{name} range [{lo}, {hi}) is empty or invalid")));
    }
    Ok(())
}

/// Every `w >= 0` where two lines (or a line and zero) meet.
pub fn crossing_points(values: &[f64], prices: &[f64]) -> Vec<f64> {
    let n = values.len();
    let mut ws: Vec<f64> = (0..n).filter(|&i| values[i] > 0.0).map(|i| prices[i] / values[i]).collect();
    for a in 0..n {
        for b in a + 1..n {
            if values[a] != values[b] {
                let w = (prices[a] - prices[b]) / (values[a] - values[b]);
                if w >= 0.0 {
                    ws.push(w);
                }
            }
        }
    }
    ws
}

/// No equal prices, no equal values, and no two crossings at the same type.
pub fn in_general_position(values: &[f64], prices: &[f64]) -> bool {
    let distinct = |xs: &[f64]| {
        let mut s = xs.to_vec();
        s.sort_by(f64::total_cmp);
        s.windows(2).all(|p| p[1] - p[0] > POSITION_GAP * p[1].abs().max(1.0))
    };
    distinct(prices) && distinct(values) && distinct(&crossing_points(values, prices))
}

/// Random additive k-demand instance with ids in increasing price order.
pub fn gen_random(
    n: usize,
    k: usize,
    dist: TypeDistribution,
    price_range: (f64, f64),
    value_range: (f64, f64),
    seed: u64,
) -> Result<Instance> {
    if n == 0 || k == 0 {
        return Err(Error::Precondition("need n >= 1 and k >= 1".into()));
    }
    check_range("price", price_range)?;
    check_range("value", value_range)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..MAX_REJECTIONS {
        let mut items: Vec<(f64, f64)> = (0..n)
            .map(|_| (rng.gen_range(price_range.0..price_range.1), rng.gen_range(value_range.0..value_range.1)))
            .collect();
        items.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (prices, values): (Vec<f64>, Vec<f64>) = items.into_iter().unzip();
        if in_general_position(&values, &prices) {
            return Instance::from_prices(prices, Valuation::k_demand(values, k.min(n)), dist);
        }
    }
    Err(Error::Precondition("could not draw an instance in general position".into()))
}

/// The submodular family where picking the best single item first is a factor
/// `m - 2` off: item 0 is worth `m` alone but adds only `m - 1` to others.
pub fn gen_greedy_failure(m: usize) -> Result<Instance> {
    if m < 3 {
        return Err(Error::Precondition(format!("greedy-failure family needs m >= 3, got {m}")));
    }
    let mf = m as f64;
    let valuation = Valuation::table_from_fn(m + 1, |s| {
        if s.contains(0) {
            mf + (mf - 1.0) * s.without(0).len() as f64
        } else {
            mf * s.len() as f64
        }
    });
    let mut prices = vec![mf - 2.0; m + 1];
    prices[0] = mf;
    Instance::from_prices(prices, valuation, TypeDistribution::point_mass(1.0)?)
}

/// Two-clause XOS instance whose optimal revenue is the knapsack optimum plus
/// the price of the last item.
pub fn gen_knapsack_xos(values: &[f64], weights: &[f64], capacity: f64) -> Result<Instance> {
    if values.len() != weights.len() || values.is_empty() {
        return Err(Error::InvalidInstance("need one weight per knapsack value".into()));
    }
    if values.iter().chain(weights).any(|&x| !(x > 0.0 && x.is_finite())) || !(capacity >= 0.0) {
        return Err(Error::InvalidInstance("knapsack values and weights must be positive".into()));
    }
    let total: f64 = values.iter().sum();
    let mut c1: Vec<f64> = values.iter().map(|v| v + 1.0).collect();
    let mut c2: Vec<f64> = values.iter().zip(weights).map(|(v, w)| w + v + 1.0).collect();
    c1.push(total + 1.0 + capacity);
    c2.push(0.0);
    let mut prices = values.to_vec();
    prices.push(total + 1.0);
    Instance::from_prices(prices, Valuation::Xos { clauses: vec![c1, c2] }, TypeDistribution::point_mass(1.0)?)
}

/// Knapsack optimum by enumeration.
pub fn knapsack_optimum(values: &[f64], weights: &[f64], capacity: f64) -> f64 {
    ItemSet::full(values.len())
        .subsets()
        .filter(|s| s.iter().map(|i| weights[i]).sum::<f64>() <= capacity)
        .map(|s| s.iter().map(|i| values[i]).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Raises each price to at least `r * v({i})`, `r` the Myerson reserve.
pub fn make_well_priced(inst: &Instance) -> Result<Instance> {
    if !inst.valuation().is_subadditive_by_construction() {
        return Err(Error::Precondition(
            "per-item repricing is only sound for subadditive valuations; use all-subsets repricing manually".into(),
        ));
    }
    let r = inst.distribution().myerson_reserve()?;
    let prices = (0..inst.n()).map(|i| inst.price(i).max(r * inst.valuation().singleton_value(i))).collect();
    inst.with_prices(prices)
}

/// Types where a k-demand buyer's choice can change for some displayed set:
/// zero crossings, and crossings of two lines at positive utility with at
/// least `k - 1` other lines above them.
pub fn relevant_crossings(values: &[f64], prices: &[f64], k: usize) -> Vec<f64> {
    let n = values.len();
    let mut ws: Vec<f64> = (0..n).filter(|&i| values[i] > 0.0).map(|i| prices[i] / values[i]).collect();
    for a in 0..n {
        for b in a + 1..n {
            if values[a] == values[b] {
                continue;
            }
            let w = (prices[a] - prices[b]) / (values[a] - values[b]);
            let u = values[a] * w - prices[a];
            if w <= 0.0 || u <= 0.0 {
                continue;
            }
            let above = (0..n).filter(|&c| values[c] * w - prices[c] > u).count();
            if above + 1 >= k {
                ws.push(w);
            }
        }
    }
    ws
}

/// Whether the CDF values at the relevant crossings are pairwise more than
/// `eps0` apart. Crossings past the support all sit at `F = 1` and only need
/// to clear the others.
pub fn is_separated(inst: &Instance, eps0: f64) -> Result<bool> {
    let values = inst
        .valuation()
        .item_values()
        .ok_or_else(|| Error::Precondition("separation is defined for additive k-demand instances".into()))?;
    let k = inst.valuation().demand_bound().unwrap_or(inst.n());
    let dist = inst.distribution();
    let mut fs: Vec<f64> = relevant_crossings(values, &inst.prices(), k).into_iter().map(|w| dist.cdf(w)).collect();
    fs.sort_by(f64::total_cmp);
    Ok(fs.windows(2).all(|p| p[1] >= 1.0 || p[1] - p[0] > eps0))
}

/// Random k-demand instance with a Uniform(0, 1) type whose relevant
/// crossings are `eps0`-separated in CDF and include at least one crossing
/// of two items inside the support, by rejection.
pub fn gen_separated(n: usize, k: usize, eps0: f64, seed: u64) -> Result<Instance> {
    if n == 0 || k == 0 || !(eps0 > 0.0 && eps0 < 1.0) {
        return Err(Error::Precondition("need n >= 1, k >= 1 and 0 < eps0 < 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dist = TypeDistribution::uniform(0.0, 1.0)?;
    for _ in 0..MAX_REJECTIONS * 10 {
        let mut items: Vec<(f64, f64)> = (0..n)
            .map(|_| {
                let v: f64 = rng.gen_range(0.5..2.0);
                let t: f64 = rng.gen_range(eps0..1.0 - eps0);
                (v * t, v)
            })
            .collect();
        items.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (prices, values): (Vec<f64>, Vec<f64>) = items.into_iter().unzip();
        if !in_general_position(&values, &prices) {
            continue;
        }
        // At least one crossing between two items has to matter inside the
        // support, or learning reduces to the zero crossings.
        let inside = relevant_crossings(&values, &prices, k).into_iter().filter(|&w| w < 1.0).count();
        if n >= 2 && inside <= n {
            continue;
        }
        let inst = Instance::from_prices(prices, Valuation::k_demand(values, k.min(n)), dist.clone())?;
        if is_separated(&inst, eps0)? {
            return Ok(inst);
        }
    }
    Err(Error::Precondition(format!("no {eps0}-separated instance found")))
}
