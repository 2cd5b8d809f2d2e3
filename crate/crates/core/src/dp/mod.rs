//! Exact dynamic program for additive k-demand valuations.

mod arrangement;
mod sweep;

pub use arrangement::{
    build_arrangement, build_arrangement_as, initial_order, k_demand_parts, make_lines, Arrangement, Crossing, Line,
    MAX_LINES,
};
pub use sweep::{sweep, SweepEvent, SweepInput, SweepResult};

use crate::choice::Objective;
use crate::error::Result;
use crate::model::Instance;
use crate::scalar::Scalar;
use crate::subset::ItemSet;

#[derive(Clone, Debug, PartialEq)]
pub struct DpOutcome<S = f64> {
    pub assortment: ItemSet,
    pub value: S,
    pub states_visited: usize,
    pub events: usize,
    pub warnings: Vec<String>,
}

/// Items on the lines of `mask`, padding removed.
pub fn reconstruct_assortment(lines: &[Line], mask: u128) -> ItemSet {
    (0..lines.len()).filter(|&x| mask >> x & 1 == 1).filter_map(|x| lines[x].item).collect()
}

/// Items on the lines of a top-k mask.
fn purchased(lines: &[Line], mask: u128) -> ItemSet {
    reconstruct_assortment(lines, mask)
}

pub fn dp_optimal(inst: &Instance, objective: Objective, budget: Option<usize>) -> Result<DpOutcome<f64>> {
    dp_optimal_as::<f64>(inst, objective, budget)
}

pub fn dp_optimal_as<S: Scalar>(inst: &Instance, objective: Objective, budget: Option<usize>) -> Result<DpOutcome<S>> {
    let prices = inst.prices();
    match objective {
        Objective::Revenue => dp_optimal_with::<S, _>(inst, budget, |set: ItemSet| {
            set.iter().fold(S::zero(), |acc, i| acc + S::lift(prices[i]))
        }),
        Objective::Welfare => dp_optimal_with::<S, _>(inst, budget, |set: ItemSet| inst.valuation().value_as::<S>(set)),
    }
}

/// Maximizes the expectation of `g(purchased bundle)` over assortments with
/// at most `budget` items (any size when `None`).
pub fn dp_optimal_with<S, G>(inst: &Instance, budget: Option<usize>, g: G) -> Result<DpOutcome<S>>
where
    S: Scalar,
    G: Fn(ItemSet) -> S + Sync,
{
    let arr = build_arrangement_as::<S>(inst)?;
    let mut warnings = arr.warnings.clone();
    let dist = inst.distribution();
    if dist.has_atoms() {
        warnings.push("distribution has atoms; a type on a breakpoint buys the higher-priced option".into());
    }
    let mut events: Vec<SweepEvent<S>> = Vec::with_capacity(arr.events.len());
    for (idx, c) in arr.events.iter().enumerate() {
        let cdf_left = match idx.checked_sub(1).map(|p| &arr.events[p]) {
            Some(prev) if prev.w == c.w => events[idx - 1].cdf_left.clone(),
            _ => S::cdf_in(dist, &c.w, true)?,
        };
        events.push(SweepEvent { up: c.up, down: c.down, cdf_left });
    }
    let input = SweepInput { num_lines: arr.lines.len(), k: arr.k, initial_order: &arr.initial_order, events: &events };
    let lines = &arr.lines;
    let res = sweep(&input, budget, |mask| g(purchased(lines, mask)))?;
    log::debug!("dp: {} lines, {} swaps, {} states", lines.len(), events.len(), res.states_visited);
    Ok(DpOutcome {
        assortment: reconstruct_assortment(lines, res.lines),
        value: res.value,
        states_visited: res.states_visited,
        events: events.len(),
        warnings,
    })
}

#[cfg(test)]
mod tests {
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use super::*;
    use crate::exact::brute_force_optimal;
    use crate::model::{TypeDistribution, Valuation};

    fn random_instance(seed: u64, n: usize, k: usize, dist: TypeDistribution) -> Instance {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..1.0)).collect();
        let prices: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        Instance::from_prices(prices, Valuation::k_demand(values, k), dist).unwrap()
    }

    fn instance_a() -> Instance {
        Instance::from_prices(
            vec![0.5, 1.5],
            Valuation::k_demand(vec![1.0, 2.0], 1),
            TypeDistribution::uniform(0.0, 2.0).unwrap(),
        )
        .unwrap()
    }

    #[test]
    fn instance_a_examples() {
        for budget in [None, Some(1)] {
            let out = dp_optimal(&instance_a(), Objective::Revenue, budget).unwrap();
            assert_eq!(out.assortment, ItemSet::singleton(1));
            assert!((out.value - 0.9375).abs() < 1e-12);
        }
    }

    #[test]
    fn zero_objective_gives_zero() {
        let out = dp_optimal_with::<f64, _>(&instance_a(), None, |_| 0.0).unwrap();
        assert_eq!(out.value, 0.0);
        assert_eq!(out.assortment, ItemSet::EMPTY);
    }

    #[test]
    fn matches_brute_force_on_random_instances() {
        for seed in 0..60u64 {
            let n = 4 + (seed % 4) as usize;
            let k = 1 + (seed % 3) as usize;
            let dist = if seed % 2 == 0 {
                TypeDistribution::uniform(0.0, 1.0).unwrap()
            } else {
                TypeDistribution::exponential(1.0).unwrap()
            };
            let inst = random_instance(seed, n, k, dist);
            for objective in [Objective::Revenue, Objective::Welfare] {
                for ell in 1..=n {
                    let i = inst.clone().with_ell(ell).unwrap();
                    let bf = brute_force_optimal(&i, objective).unwrap();
                    let dp = dp_optimal(&i, objective, Some(ell)).unwrap();
                    assert!(
                        (bf.value - dp.value).abs() < 1e-9,
                        "seed {seed} n {n} k {k} ell {ell} {objective:?}: brute {} dp {}",
                        bf.value,
                        dp.value
                    );
                    assert!(dp.assortment.len() <= ell);
                    let re = crate::choice::evaluate(&i, dp.assortment, objective).unwrap();
                    assert!((re - dp.value).abs() < 1e-9, "seed {seed}: re-evaluated {re} vs {}", dp.value);
                }
            }
        }
    }

    #[test]
    fn degenerate_instances_match_in_exact_mode() {
        use crate::exact::brute_force_optimal_as;
        use crate::model::Arithmetic;
        use crate::scalar::Rational;
        // Coincident crossings, a zero price, identical and parallel lines.
        let cases = [
            (vec![1.0, 2.0, 3.0, 2.0], vec![0.5, 1.0, 1.5, 1.0], 2usize),
            (vec![1.0, 2.0, 4.0, 1.0], vec![0.0, 1.0, 3.0, 0.25], 1),
            (vec![2.0, 2.0, 3.0, 1.0, 4.0], vec![0.5, 0.75, 1.5, 0.25, 2.5], 3),
        ];
        for (values, prices, k) in cases {
            for dist in [TypeDistribution::uniform(0.0, 1.0).unwrap(), TypeDistribution::point_mass(0.5).unwrap()] {
                let base = Instance::from_prices(prices.clone(), Valuation::k_demand(values.clone(), k), dist)
                    .unwrap()
                    .with_arithmetic(Arithmetic::Exact);
                for ell in 1..=base.n() {
                    let i = base.clone().with_ell(ell).unwrap();
                    for objective in [Objective::Revenue, Objective::Welfare] {
                        let bf = brute_force_optimal_as::<Rational>(&i, objective).unwrap();
                        let dp = dp_optimal_as::<Rational>(&i, objective, Some(ell)).unwrap();
                        assert_eq!(bf.value, dp.value, "{values:?} k {k} ell {ell} {objective:?}");
                    }
                }
            }
        }
    }
}
