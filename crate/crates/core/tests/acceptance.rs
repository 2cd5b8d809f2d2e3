//! The acceptance battery. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::Instant;

use assortment::choice::{expected_revenue, utility_at, Objective};
use assortment::dp::{dp_optimal, dp_optimal_as};
use assortment::exact::{
    assortment_values_as, best_in_table, brute_force_optimal, concave_small_search, marginal_greedy,
};
use assortment::lab::{
    gen_greedy_failure, gen_knapsack_xos, gen_random, gen_separated, knapsack_optimum, make_well_priced,
};
use assortment::learning::{learn_assortment, total_queries, BuyerSimulator, LearnConfig};
use assortment::model::{verify_valuation_class, ValuationClass};
use assortment::scalar::Rational;
use assortment::wellpriced::{
    convex_envelope, default_epsilon, greedy_constrained, round_revenue_curve, show_all, welfare_greedy,
    welfare_show_all,
};
use assortment::{Arithmetic, Instance, ItemSet, TypeDistribution, Valuation};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: assortment::Error) -> String {
    e.to_string()
}

fn uniform(lo: f64, hi: f64) -> TypeDistribution {
    TypeDistribution::uniform(lo, hi).unwrap()
}

fn exponential(rate: f64) -> TypeDistribution {
    TypeDistribution::exponential(rate).unwrap()
}

fn dp_matches_brute_force() -> Outcome {
    let mut checks = 0usize;
    let mut exact_checks = 0usize;
    for seed in 0..200u64 {
        let n = 4 + (seed % 4) as usize;
        let k = 1 + (seed / 4 % 3) as usize;
        let is_uniform = seed / 12 % 2 == 0;
        let dist = if is_uniform { uniform(0.0, 1.0) } else { exponential(1.0) };
        let inst = gen_random(n, k, dist, (0.0, 1.0), (0.1, 1.0), seed).map_err(err)?;
        let exact_inst = inst.clone().with_arithmetic(Arithmetic::Exact);
        for objective in [Objective::Revenue, Objective::Welfare] {
            let table = assortment_values_as::<f64>(&inst, objective, n).map_err(err)?;
            let exact_table = if is_uniform {
                Some(assortment_values_as::<Rational>(&exact_inst, objective, n).map_err(err)?)
            } else {
                None
            };
            for budget in std::iter::once(None).chain((1..=n).map(Some)) {
                let ell = budget.unwrap_or(n);
                let dp = dp_optimal(&inst, objective, budget).map_err(err)?;
                let (_, oracle) = best_in_table(&table, ell, 0.0);
                ensure((dp.value - oracle).abs() <= 1e-9, || {
                    format!("seed {seed} {objective:?} budget {budget:?}: dp {} vs brute force {oracle}", dp.value)
                })?;
                checks += 1;
                if let Some(t) = &exact_table {
                    let dp = dp_optimal_as::<Rational>(&exact_inst, objective, budget).map_err(err)?;
                    let (_, oracle) = best_in_table(t, ell, 0.0);
                    ensure(dp.value == oracle, || {
                        format!("seed {seed} {objective:?} budget {budget:?}: exact dp {} vs {oracle}", dp.value)
                    })?;
                    exact_checks += 1;
                }
            }
        }
    }
    Ok(format!("{checks} float and {exact_checks} exact comparisons agree"))
}

/// Best revenue over one assortment per orbit of the family's symmetry.
fn orbit_optimum(inst: &Instance, m: usize) -> Result<f64, String> {
    let mut best = 0.0f64;
    for with_zero in [false, true] {
        for j in 0..=m {
            let mut t = ItemSet::from_ids(1..=j);
            if with_zero {
                t = t.with(0);
            }
            best = best.max(expected_revenue(inst, t).map_err(err)?);
        }
    }
    Ok(best)
}

fn greedy_failure_ratio() -> Outcome {
    let mut report = Vec::new();
    for m in [5usize, 10, 20] {
        let inst = gen_greedy_failure(m).map_err(err)?;
        let mf = m as f64;
        let greedy = marginal_greedy(&inst, Objective::Revenue).map_err(err)?;
        ensure(greedy.value == mf, || format!("m = {m}: greedy revenue {} != {m}", greedy.value))?;
        let orbit = orbit_optimum(&inst, m)?;
        if m <= 10 {
            let full = brute_force_optimal(&inst, Objective::Revenue).map_err(err)?;
            ensure(full.value == orbit, || format!("m = {m}: full search {} vs orbit search {orbit}", full.value))?;
        }
        ensure(orbit == (mf - 2.0) * mf, || format!("m = {m}: optimum {orbit} != {}", (mf - 2.0) * mf))?;
        ensure(orbit / greedy.value == mf - 2.0, || format!("m = {m}: ratio {}", orbit / greedy.value))?;
        report.push(format!("m={m}: {}/{} = {}", orbit, greedy.value, orbit / greedy.value));
    }
    Ok(report.join(", "))
}

fn regular(seed: u64) -> TypeDistribution {
    match seed % 3 {
        0 => uniform(0.0, 1.0),
        1 => exponential(1.0),
        _ => uniform(0.0, 2.0),
    }
}

fn show_all_four_approx() -> Outcome {
    let mut worst = f64::INFINITY;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(2..=7);
        let k = rng.gen_range(1..=n);
        let raw = gen_random(n, k, regular(seed), (0.0, 1.0), (0.1, 1.0), seed).map_err(err)?;
        let inst = make_well_priced(&raw).map_err(err)?;
        let all = show_all(&inst, true).map_err(err)?;
        let opt = brute_force_optimal(&inst, Objective::Revenue).map_err(err)?;
        ensure(all.value * 4.0 >= opt.value - 1e-12, || {
            format!("seed {seed}: show-all {} < OPT {} / 4", all.value, opt.value)
        })?;
        if opt.value > 0.0 {
            worst = worst.min(all.value / opt.value);
        }
    }
    ensure(worst > 0.25, || format!("worst ratio {worst} not above 1/4"))?;
    Ok(format!("worst Rev(N)/OPT = {worst:.4}"))
}

fn constrained_greedy() -> Outcome {
    let mut worst = f64::INFINITY;
    let eps = default_epsilon();
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(1000 + seed);
        let n = rng.gen_range(3..=7);
        let ell = 1 + (seed % 3) as usize;
        let raw = gen_random(n, n, regular(seed), (0.0, 1.0), (0.1, 1.0), 1000 + seed).map_err(err)?;
        let values = raw.valuation().item_values().unwrap().to_vec();
        let additive = Instance::from_prices(raw.prices(), Valuation::additive(values), raw.distribution().clone())
            .and_then(|i| i.with_ell(ell))
            .map_err(err)?;
        let inst = make_well_priced(&additive).map_err(err)?;
        let g = greedy_constrained(&inst, Some(eps)).map_err(err)?;
        let opt = brute_force_optimal(&inst, Objective::Revenue).map_err(err)?;
        ensure(g.assortment.len() <= ell, || {
            format!("seed {seed}: greedy shows {} > {ell} items", g.assortment.len())
        })?;
        ensure(g.value * 6.33 >= opt.value - 1e-12, || {
            format!("seed {seed} ell {ell}: greedy {} < OPT {} / 6.33", g.value, opt.value)
        })?;
        if opt.value > 0.0 {
            worst = worst.min(g.value / opt.value);
        }
    }
    Ok(format!("worst greedy/OPT = {worst:.4} (bound {:.4})", 1.0 / 6.33))
}

fn envelope_sandwich() -> Outcome {
    let eps = default_epsilon();
    let tau = 1e-9;
    let mut report = Vec::new();
    for (name, dist) in [("Uniform(0,2)", uniform(0.0, 2.0)), ("Exponential(1)", exponential(1.0))] {
        let r = dist.myerson_reserve().map_err(err)?;
        let curve = round_revenue_curve(&dist, r, eps).map_err(err)?;
        let env = convex_envelope(&curve).map_err(err)?;
        let top = dist.revenue(r);
        let hi = dist.grid_hi();
        let mut violations = 0usize;
        for j in 0..1000 {
            let w = r + (hi - r) * j as f64 / 999.0;
            let (rev, star, hat) = (dist.revenue(w), curve.value(w), env.value(w));
            let slack = tau * top.max(1.0);
            if hat > star + slack || star > 4.0 * hat + slack {
                violations += 1;
            }
            if rev > star + slack || star > (1.0 + eps) * rev + eps * top + slack {
                violations += 1;
            }
        }
        ensure(violations == 0, || format!("{name}: {violations} violations"))?;
        report.push(format!("{name}: {} levels, {} hull vertices", curve.levels(), env.vertices.len()));
    }
    Ok(report.join("; "))
}

/// Value of the best assignment of a bundle to two slots.
fn two_slot_value(weights: &[[f64; 2]], s: ItemSet) -> f64 {
    let ids = s.to_vec();
    let mut best = 0.0f64;
    for &a in &ids {
        best = best.max(weights[a][0]).max(weights[a][1]);
        for &b in &ids {
            if a != b {
                best = best.max(weights[a][0] + weights[b][1]);
            }
        }
    }
    best
}

fn gs_utility_submodular() -> Outcome {
    let tau = 1e-9;
    let mut instances = Vec::new();
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(2000 + seed);
        let n = rng.gen_range(2..=6);
        let values = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        let prices = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        instances.push(Instance::from_prices(prices, Valuation::additive(values), uniform(0.0, 2.0)).map_err(err)?);
    }
    let mut seed = 0u64;
    let mut tables = 0usize;
    while tables < 20 {
        let mut rng = ChaCha8Rng::seed_from_u64(3000 + seed);
        seed += 1;
        let n = rng.gen_range(2..=6);
        let weights: Vec<[f64; 2]> = (0..n).map(|_| [rng.gen_range(0.0..1.0), rng.gen_range(0.0..1.0)]).collect();
        let v = Valuation::table_from_fn(n, |s| two_slot_value(&weights, s));
        if !verify_valuation_class(&v, ValuationClass::GrossSubstitutes).map_err(err)?.holds {
            continue;
        }
        let prices = (0..n).map(|_| rng.gen_range(0.0..1.0)).collect();
        instances.push(Instance::from_prices(prices, v, uniform(0.0, 2.0)).map_err(err)?);
        tables += 1;
    }
    let mut checks = 0usize;
    for (idx, inst) in instances.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(4000 + idx as u64);
        let ws: Vec<f64> = (0..50).map(|_| rng.gen_range(0.0..3.0)).collect();
        let n = inst.n();
        for t in inst.all_items().subsets() {
            for i in 0..n {
                for j in i + 1..n {
                    if t.contains(i) || t.contains(j) {
                        continue;
                    }
                    for &w in &ws {
                        let u = |s: ItemSet| utility_at(inst, s, w).map_err(err);
                        let lhs = u(t.with(i))? + u(t.with(j))?;
                        let rhs = u(t.with(i).with(j))? + u(t)?;
                        ensure(lhs >= rhs - tau, || {
                            format!("instance {idx}, T {t:?}, i {i}, j {j}, w {w}: {lhs} < {rhs}")
                        })?;
                        checks += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checks} (T, i, j, w) checks over 50 additive and {tables} verified tables"))
}

fn concave_size_k() -> Outcome {
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(5000 + seed);
        let n = rng.gen_range(2..=7);
        let k = 1 + (seed % 2) as usize;
        let hi = if seed % 4 < 2 { 1.0 } else { 2.0 };
        let inst = gen_random(n, k, uniform(0.0, hi), (0.0, 1.0), (0.1, 1.0), 5000 + seed).map_err(err)?;
        let small = concave_small_search(&inst).map_err(err)?;
        let opt = brute_force_optimal(&inst, Objective::Revenue).map_err(err)?;
        ensure((small.value - opt.value).abs() <= 1e-9, || {
            format!("seed {seed}: size-bounded {} vs brute force {}", small.value, opt.value)
        })?;
    }
    Ok("100 instances agree".into())
}

fn welfare_show_all_and_greedy() -> Outcome {
    let mut worst = f64::INFINITY;
    for seed in 0..100u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(6000 + seed);
        let n = rng.gen_range(2..=7);
        let k = rng.gen_range(1..=n);
        let raw = gen_random(n, k, regular(seed), (0.0, 1.0), (0.1, 1.0), 6000 + seed).map_err(err)?;
        let inst = make_well_priced(&raw).map_err(err)?;
        let all = welfare_show_all(&inst).map_err(err)?;
        let opt = brute_force_optimal(&inst, Objective::Welfare).map_err(err)?;
        ensure((all.value - opt.value).abs() <= 1e-9, || {
            format!("seed {seed}: Wel(N) {} vs max Wel(T) {}", all.value, opt.value)
        })?;
        let ell = rng.gen_range(1..=n.min(3));
        let constrained = inst.with_ell(ell).map_err(err)?;
        let g = welfare_greedy(&constrained, None).map_err(err)?;
        let opt = brute_force_optimal(&constrained, Objective::Welfare).map_err(err)?;
        ensure(g.value * 1.6 >= opt.value - 1e-12, || {
            format!("seed {seed} ell {ell}: greedy welfare {} < OPT {} / 1.6", g.value, opt.value)
        })?;
        if opt.value > 0.0 {
            worst = worst.min(g.value / opt.value);
        }
    }
    Ok(format!("show-all exact on 100 instances; worst constrained greedy ratio {worst:.4}"))
}

fn knapsack_identity() -> Outcome {
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(7000 + seed);
        let m = rng.gen_range(1..=6);
        let values: Vec<f64> = (0..m).map(|_| rng.gen_range(1..=10) as f64).collect();
        let weights: Vec<f64> = (0..m).map(|_| rng.gen_range(1..=10) as f64).collect();
        let cap = rng.gen_range(0..=weights.iter().sum::<f64>() as u32) as f64;
        let inst = gen_knapsack_xos(&values, &weights, cap).map_err(err)?;
        let opt = brute_force_optimal(&inst, Objective::Revenue).map_err(err)?;
        let expect = knapsack_optimum(&values, &weights, cap) + inst.price(m);
        ensure(opt.value == expect, || format!("seed {seed}: optimum {} != knapsack + p_n = {expect}", opt.value))?;
    }
    Ok("50 instances match exactly".into())
}

fn learning_end_to_end() -> Outcome {
    let (n, k, eps) = (6usize, 2usize, 0.05);
    let mut within = 0usize;
    let mut fitted = 0.0f64;
    for seed in 0..50u64 {
        let hidden = gen_separated(n, k, eps, 8000 + seed).map_err(err)?;
        let offline = dp_optimal(&hidden, Objective::Revenue, None).map_err(err)?;
        let mut sim = BuyerSimulator::new(hidden.clone(), 9000 + seed).with_log(false);
        let out = learn_assortment(&mut sim, &LearnConfig::new(k, eps)).map_err(err)?;
        let expected_queries = total_queries(n, k, out.samples_per_item, out.samples_per_set);
        ensure(out.queries_used == expected_queries && sim.queries() == expected_queries, || {
            format!("seed {seed}: {} queries, expected {expected_queries}", out.queries_used)
        })?;
        let truth = expected_revenue(&hidden, out.assortment).map_err(err)?;
        let mut prices = hidden.prices();
        prices.sort_by(|a, b| b.total_cmp(a));
        let scale = eps * (prices[0] + prices[1]);
        let gap = (offline.value - truth).abs();
        if gap <= scale {
            within += 1;
        }
        fitted = fitted.max(gap / scale);
    }
    ensure(within * 100 >= 95 * 50, || format!("only {within}/50 trials within eps * max pair price"))?;
    Ok(format!("{within}/50 within bound, fitted constant c = {fitted:.3}"))
}

/// Integral of the paid price against the density, piece by piece between
/// consecutive crossing types, with Gauss-Legendre nodes on each piece.
fn integrated_revenue(inst: &Instance) -> Result<f64, String> {
    const NODES: [(f64, f64); 5] = [
        (0.0, 0.5688888888888889),
        (-0.5384693101056831, 0.4786286704993665),
        (0.5384693101056831, 0.4786286704993665),
        (-0.906_179_845_938_664, 0.2369268850561891),
        (0.906_179_845_938_664, 0.2369268850561891),
    ];
    let dist = inst.distribution();
    let values = inst.valuation().item_values().unwrap();
    let mut cuts = assortment::lab::crossing_points(values, &inst.prices());
    let (lo, hi) = (dist.support_lo().max(0.0), dist.support_hi().min(60.0));
    cuts.retain(|&w| w > lo && w < hi);
    cuts.extend([lo, hi]);
    cuts.sort_by(f64::total_cmp);
    let mut total = 0.0;
    for pair in cuts.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        if b <= a {
            continue;
        }
        let bundle = assortment::choice::best_bundle(inst, inst.all_items(), 0.5 * (a + b)).map_err(err)?;
        let paid = inst.price_of(bundle);
        let pieces = 64;
        for s in 0..pieces {
            let (x0, x1) = (a + (b - a) * s as f64 / pieces as f64, a + (b - a) * (s + 1) as f64 / pieces as f64);
            let half = 0.5 * (x1 - x0);
            for (x, wt) in NODES {
                total += paid * wt * half * dist.density(x0 + half * (1.0 + x)).unwrap_or(0.0);
            }
        }
    }
    Ok(total)
}

fn revenue_formula_consistency() -> Outcome {
    let samples = 100_000usize;
    let mut worst_z = 0.0f64;
    let mut worst_int = 0.0f64;
    for seed in 0..50u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(10_000 + seed);
        let n = rng.gen_range(2..=7);
        let k = rng.gen_range(1..=n);
        let inst = gen_random(n, k, regular(seed), (0.0, 1.0), (0.1, 1.0), 10_000 + seed).map_err(err)?;
        let all = inst.all_items();
        let formula = expected_revenue(&inst, all).map_err(err)?;
        let (mut sum, mut sum_sq) = (0.0, 0.0);
        for _ in 0..samples {
            let w = inst.distribution().sample(&mut rng);
            let paid = inst.price_of(assortment::choice::best_bundle(&inst, all, w).map_err(err)?);
            sum += paid;
            sum_sq += paid * paid;
        }
        let mean = sum / samples as f64;
        let se = ((sum_sq / samples as f64 - mean * mean).max(0.0) / samples as f64).sqrt();
        let z = if se > 0.0 { (formula - mean).abs() / se } else { (formula - mean).abs() * f64::INFINITY };
        ensure(z <= 3.0 || (formula - mean).abs() < 1e-12, || {
            format!("seed {seed}: formula {formula} vs Monte Carlo {mean} ({z:.2} standard errors)")
        })?;
        let integral = integrated_revenue(&inst)?;
        ensure((formula - integral).abs() <= 1e-6, || {
            format!("seed {seed}: formula {formula} vs integral {integral}")
        })?;
        if z.is_finite() {
            worst_z = worst_z.max(z);
        }
        worst_int = worst_int.max((formula - integral).abs());
    }
    Ok(format!("max deviation {worst_z:.2} standard errors, max integration gap {worst_int:.1e}"))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("dp equals brute force", dp_matches_brute_force),
        ("greedy-failure ratio", greedy_failure_ratio),
        ("show-all within factor 4", show_all_four_approx),
        ("constrained greedy within 6.33", constrained_greedy),
        ("envelope sandwich", envelope_sandwich),
        ("gross-substitutes utility submodularity", gs_utility_submodular),
        ("size-bounded search under concave revenue", concave_size_k),
        ("welfare show-all and welfare greedy", welfare_show_all_and_greedy),
        ("knapsack identity", knapsack_identity),
        ("learning end to end", learning_end_to_end),
        ("revenue formula consistency", revenue_formula_consistency),
    ];
    let mut failed = 0;
    for (idx, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name}: {detail} [{secs:.1}s]", idx + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name}: {detail} [{secs:.1}s]", idx + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
