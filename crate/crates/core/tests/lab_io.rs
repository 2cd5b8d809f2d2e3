use assortment::choice::Objective;
use assortment::exact::brute_force_optimal;
use assortment::io::{parse_instance, write_instance};
use assortment::lab::{gen_knapsack_xos, gen_random, knapsack_optimum, make_well_priced};
use assortment::{ItemSet, TypeDistribution, Valuation};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Revenue at a unit type straight from the clauses: the buyer takes the
/// bundle of largest surplus, pricier on ties, then the smaller mask.
fn direct_unit_type_optimum(clauses: &[Vec<f64>], prices: &[f64]) -> f64 {
    let n = prices.len();
    let value = |s: ItemSet| clauses.iter().map(|c| s.iter().map(|i| c[i]).sum::<f64>()).fold(0.0, f64::max);
    let price = |s: ItemSet| s.iter().map(|i| prices[i]).sum::<f64>();
    let mut best = 0.0f64;
    for shown in 0..1u64 << n {
        let mut pick = (0.0f64, 0.0f64);
        for sub in 0..1u64 << n {
            if sub & !shown != 0 {
                continue;
            }
            let s = ItemSet(sub);
            let (u, p) = (value(s) - price(s), price(s));
            if u > pick.0 || (u == pick.0 && p > pick.1) {
                pick = (u, p);
            }
        }
        best = best.max(pick.1);
    }
    best
}

#[test]
fn knapsack_identity_by_two_searches() {
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = rng.gen_range(1..=6);
        let values: Vec<f64> = (0..m).map(|_| rng.gen_range(1..=9) as f64).collect();
        let weights: Vec<f64> = (0..m).map(|_| rng.gen_range(1..=9) as f64).collect();
        let cap = rng.gen_range(0..=weights.iter().sum::<f64>() as u32) as f64;
        let inst = gen_knapsack_xos(&values, &weights, cap).unwrap();
        let Valuation::Xos { clauses } = inst.valuation() else { panic!("xos expected") };
        let expect = knapsack_optimum(&values, &weights, cap) + inst.price(m);
        assert_eq!(brute_force_optimal(&inst, Objective::Revenue).unwrap().value, expect, "seed {seed}");
        assert_eq!(direct_unit_type_optimum(clauses, &inst.prices()), expect, "seed {seed}");
    }
}

#[test]
fn random_instances_are_in_general_position() {
    for seed in 0..100u64 {
        let n = 2 + (seed % 7) as usize;
        let inst =
            gen_random(n, 2, TypeDistribution::uniform(0.0, 1.0).unwrap(), (0.0, 1.0), (0.1, 1.0), seed).unwrap();
        let v = inst.valuation().item_values().unwrap();
        let p = inst.prices();
        let mut points = Vec::new();
        for a in 0..n {
            points.push(p[a] / v[a]);
            for b in a + 1..n {
                assert!(v[a] != v[b] || p[a] != p[b], "seed {seed}: duplicate lines");
                let w = (p[a] - p[b]) / (v[a] - v[b]);
                if w >= 0.0 {
                    points.push(w);
                }
            }
        }
        points.sort_by(f64::total_cmp);
        assert!(points.windows(2).all(|x| x[1] - x[0] > 1e-12), "seed {seed}: coincident crossings");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn well_pricing_is_idempotent_and_only_raises_prices(seed in 0u64..10_000, n in 1usize..7) {
        let dist = TypeDistribution::uniform(0.0, 2.0).unwrap();
        let inst = gen_random(n, n, dist, (0.0, 1.0), (0.1, 1.0), seed).unwrap();
        let once = make_well_priced(&inst).unwrap();
        prop_assert!(once.prices().iter().zip(inst.prices()).all(|(a, b)| *a >= b));
        prop_assert_eq!(make_well_priced(&once).unwrap(), once);
    }

    #[test]
    fn instance_files_round_trip(seed in 0u64..10_000, n in 1usize..8, exp in proptest::bool::ANY) {
        let dist = if exp { TypeDistribution::exponential(1.3).unwrap() } else { TypeDistribution::uniform(0.2, 1.7).unwrap() };
        let inst = gen_random(n, 1 + n / 2, dist, (0.0, 1.0), (0.1, 1.0), seed).unwrap();
        let text = write_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(write_instance(&back), text);
    }
}
