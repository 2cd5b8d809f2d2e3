//! Parallel against sequential execution on the data-parallel hot spots:
//! exhaustive search, batches of seeded trials, DP transitions and the
//! greedy argmax.

use std::hint::black_box;

use assortment::choice::Objective;
use assortment::dp::dp_optimal;
use assortment::exact::{brute_force_optimal, marginal_greedy};
use assortment::lab::{gen_random, make_well_priced};
use assortment::par::{self, Execution};
use assortment::wellpriced::greedy_constrained;
use assortment::{Instance, TypeDistribution, Valuation};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

const MODES: [(&str, Execution); 2] = [("parallel", Execution::Parallel), ("sequential", Execution::Sequential)];

fn random(n: usize, k: usize, seed: u64) -> Instance {
    gen_random(n, k, TypeDistribution::uniform(0.0, 1.0).unwrap(), (0.0, 1.0), (0.1, 1.0), seed).unwrap()
}

fn brute_force(c: &mut Criterion) {
    let inst = random(12, 3, 1);
    let mut group = c.benchmark_group("brute_force_n12");
    for (name, mode) in MODES {
        group.bench_function(name, |b| {
            par::set_execution(mode);
            b.iter(|| black_box(brute_force_optimal(&inst, Objective::Revenue).unwrap()));
        });
    }
    group.finish();
}

fn bench_trials(c: &mut Criterion) {
    let mut group = c.benchmark_group("dp_vs_brute_trials_64");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(name, |b| {
            par::set_execution(mode);
            b.iter(|| {
                let ratios = par::map_range(0..64, |seed| {
                    let inst = random(7, 2, seed);
                    let dp = dp_optimal(&inst, Objective::Revenue, None).unwrap();
                    let bf = brute_force_optimal(&inst, Objective::Revenue).unwrap();
                    dp.value / bf.value
                });
                black_box(ratios)
            });
        });
    }
    group.finish();
}

fn dp_transitions(c: &mut Criterion) {
    let mut group = c.benchmark_group("dp_transitions");
    group.sample_size(10);
    for (n, k) in [(12usize, 2usize), (10, 3)] {
        let inst = random(n, k, 3);
        for (name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(name, format!("n{n}_k{k}")), &inst, |b, inst| {
                par::set_execution(mode);
                b.iter(|| black_box(dp_optimal(inst, Objective::Revenue, None).unwrap()));
            });
        }
    }
    group.finish();
}

fn greedy_argmax(c: &mut Criterion) {
    let raw = random(16, 16, 5);
    let values = raw.valuation().item_values().unwrap().to_vec();
    let additive = Instance::from_prices(raw.prices(), Valuation::additive(values), raw.distribution().clone())
        .and_then(|i| i.with_ell(4))
        .unwrap();
    let inst = make_well_priced(&additive).unwrap();
    let mut group = c.benchmark_group("greedy_argmax");
    group.sample_size(10);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::new(name, "envelope"), |b| {
            par::set_execution(mode);
            b.iter(|| black_box(greedy_constrained(&inst, Some(0.01)).unwrap()));
        });
        group.bench_function(BenchmarkId::new(name, "marginal"), |b| {
            par::set_execution(mode);
            b.iter(|| black_box(marginal_greedy(&inst, Objective::Revenue).unwrap()));
        });
    }
    group.finish();
}

criterion_group!(benches, brute_force, bench_trials, dp_transitions, greedy_argmax);
criterion_main!(benches);
