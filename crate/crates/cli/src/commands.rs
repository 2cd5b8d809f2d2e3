use std::fs;
use std::path::Path;
use std::time::Instant;

use anyhow::{bail, Context, Result};
use assortment::choice::{evaluate_as, expected_revenue, frontier_as, Objective};
use assortment::dp::{dp_optimal_as, k_demand_parts};
use assortment::exact::{brute_force_optimal_as, concave_small_search, marginal_greedy};
use assortment::io::{float_json, format_float, frontier_json, parse_instance, scalar_json, set_json, write_instance};
use assortment::lab;
use assortment::learning::{learn_assortment, BuyerSimulator, LearnConfig};
use assortment::scalar::{Rational, Scalar};
use assortment::wellpriced::{greedy_constrained, show_all, welfare_greedy, welfare_show_all};
use assortment::{Arithmetic, Error, Instance, ItemSet, TypeDistribution};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::{Algo, BenchArgs, DistArg, Family, GenArgs, ObjectiveArg};

fn load(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    Ok(parse_instance(&text)?)
}

fn print_json(doc: Map<String, Value>) -> Result<()> {
    println!("{}", serde_json::to_string_pretty(&Value::Object(doc))?);
    Ok(())
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Revenue => Objective::Revenue,
            ObjectiveArg::Welfare => Objective::Welfare,
        }
    }
}

fn algo_name(algo: Algo) -> &'static str {
    match algo {
        Algo::Brute => "brute",
        Algo::Dp => "dp",
        Algo::Concave => "concave",
        Algo::ShowAll => "show-all",
        Algo::Greedy => "greedy",
        Algo::MarginalGreedy => "marginal-greedy",
    }
}

/// What a solver run produced, with the value already rendered.
struct Run {
    assortment: ItemSet,
    value: Value,
    guarantee: Option<f64>,
    warnings: Vec<String>,
    extra: Map<String, Value>,
}

fn run_exact<S: Scalar>(inst: &Instance, algo: Algo, objective: Objective) -> Result<Run> {
    let mut extra = Map::new();
    let (assortment, value, warnings) = match algo {
        Algo::Brute => {
            let s = brute_force_optimal_as::<S>(inst, objective)?;
            (s.assortment, scalar_json(&s.value), s.warnings)
        }
        Algo::Dp => {
            let budget = (inst.ell() < inst.n()).then_some(inst.ell());
            let out = dp_optimal_as::<S>(inst, objective, budget)?;
            extra.insert("states_visited".into(), json!(out.states_visited));
            extra.insert("events".into(), json!(out.events));
            (out.assortment, scalar_json(&out.value), out.warnings)
        }
        _ => unreachable!("only exact solvers are generic"),
    };
    Ok(Run { assortment, value, guarantee: Some(1.0), warnings, extra })
}

fn run(inst: &Instance, algo: Algo, objective: Objective, epsilon: Option<f64>, strict: bool) -> Result<Run> {
    if matches!(algo, Algo::Brute | Algo::Dp) {
        return if inst.arithmetic() == Arithmetic::Exact {
            run_exact::<Rational>(inst, algo, objective)
        } else {
            run_exact::<f64>(inst, algo, objective)
        };
    }
    let revenue_only = |name: &str| {
        if objective == Objective::Welfare {
            Err(Error::Precondition(format!("{name} optimizes revenue only")))
        } else {
            Ok(())
        }
    };
    let (assortment, value, guarantee, mut warnings) = match algo {
        Algo::Concave => {
            revenue_only("concave search")?;
            let s = concave_small_search(inst)?;
            (s.assortment, s.value, Some(1.0), s.warnings)
        }
        Algo::ShowAll => {
            let s = match objective {
                Objective::Revenue => show_all(inst, strict)?,
                Objective::Welfare => welfare_show_all(inst)?,
            };
            (s.assortment, s.value, Some(s.guarantee), s.warnings)
        }
        Algo::Greedy => {
            let s = match objective {
                Objective::Revenue => greedy_constrained(inst, epsilon)?,
                Objective::Welfare => welfare_greedy(inst, epsilon)?,
            };
            (s.assortment, s.value, Some(s.guarantee), s.warnings)
        }
        Algo::MarginalGreedy => {
            let s = marginal_greedy(inst, objective)?;
            (s.assortment, s.value, None, s.warnings)
        }
        Algo::Brute | Algo::Dp => unreachable!(),
    };
    if inst.arithmetic() == Arithmetic::Exact {
        warnings.push(format!("{} runs in floating point", algo_name(algo)));
    }
    Ok(Run { assortment, value: float_json(value), guarantee, warnings, extra: Map::new() })
}

pub fn solve(
    path: &Path,
    algo: Algo,
    objective: ObjectiveArg,
    ell: Option<usize>,
    epsilon: Option<f64>,
    strict: bool,
) -> Result<()> {
    let mut inst = load(path)?;
    if let Some(ell) = ell {
        inst = inst.with_ell(ell)?;
    }
    let start = Instant::now();
    let out = run(&inst, algo, objective.into(), epsilon, strict)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let mut doc = out.extra;
    doc.insert("algorithm".into(), json!(algo_name(algo)));
    doc.insert("assortment".into(), set_json(out.assortment));
    doc.insert("objective".into(), json!(if objective == ObjectiveArg::Revenue { "revenue" } else { "welfare" }));
    doc.insert("value".into(), out.value);
    if let Some(g) = out.guarantee {
        doc.insert("guarantee".into(), float_json(g));
    }
    doc.insert("wall_ms".into(), json!((wall_ms * 1e3).round() / 1e3));
    doc.insert("warnings".into(), json!(out.warnings));
    print_json(doc)
}

fn parse_set(text: &str, n: usize) -> Result<ItemSet, Error> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(ItemSet::EMPTY);
    }
    let mut set = ItemSet::EMPTY;
    for part in text.split(',') {
        let i: usize =
            part.trim().parse().map_err(|_| Error::Parse(format!("item id {part:?} is not a nonnegative integer")))?;
        if i >= n {
            return Err(Error::Parse(format!("item id {i} out of range for {n} items")));
        }
        set = set.with(i);
    }
    Ok(set)
}

fn evaluate_doc<S: Scalar>(inst: &Instance, t: ItemSet, explain: bool) -> Result<Map<String, Value>> {
    let mut doc = Map::new();
    doc.insert("assortment".into(), set_json(t));
    doc.insert("revenue".into(), scalar_json(&evaluate_as::<S>(inst, t, Objective::Revenue)?));
    doc.insert("welfare".into(), scalar_json(&evaluate_as::<S>(inst, t, Objective::Welfare)?));
    if explain {
        doc.insert("frontier".into(), frontier_json(&frontier_as::<S>(inst, t)?));
    }
    Ok(doc)
}

pub fn evaluate(path: &Path, set: &str, explain: bool) -> Result<()> {
    let inst = load(path)?;
    let t = parse_set(set, inst.n())?;
    let doc = if inst.arithmetic() == Arithmetic::Exact {
        evaluate_doc::<Rational>(&inst, t, explain)?
    } else {
        evaluate_doc::<f64>(&inst, t, explain)?
    };
    print_json(doc)
}

#[allow(clippy::too_many_arguments)]
pub fn learn(
    hidden: &Path,
    k: usize,
    epsilon: f64,
    epsilon0: Option<f64>,
    c0: f64,
    ell: Option<usize>,
    seed: u64,
    reveal: bool,
) -> Result<()> {
    let inst = load(hidden)?;
    k_demand_parts(inst.valuation())?;
    let cfg = LearnConfig { k, epsilon, epsilon0: epsilon0.unwrap_or(epsilon), c0, ell };
    let mut sim = BuyerSimulator::new(inst, seed).with_log(false);
    let out = learn_assortment(&mut sim, &cfg)?;
    let mut doc = Map::new();
    doc.insert("assortment".into(), set_json(out.assortment));
    doc.insert("estimated_value".into(), float_json(out.estimated_value));
    doc.insert("queries_used".into(), json!(out.queries_used));
    doc.insert("samples_per_item".into(), json!(out.samples_per_item));
    doc.insert("samples_per_set".into(), json!(out.samples_per_set));
    if reveal {
        let inst = sim.reveal();
        doc.insert("true_value".into(), float_json(expected_revenue(&inst, out.assortment)?));
    }
    print_json(doc)
}

fn distribution(dist: DistArg) -> TypeDistribution {
    match dist {
        DistArg::Uniform => TypeDistribution::uniform(0.0, 1.0),
        DistArg::Exponential => TypeDistribution::exponential(1.0),
    }
    .expect("fixed parameters are valid")
}

fn random_instance(n: usize, k: usize, dist: DistArg, seed: u64) -> Result<Instance, Error> {
    lab::gen_random(n, k, distribution(dist), (0.0, 1.0), (0.1, 1.0), seed)
}

fn parse_list(name: &str, text: Option<&str>) -> Result<Vec<f64>> {
    let text = text.with_context(|| format!("--{name} is required for this family"))?;
    text.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| Error::Parse(format!("--{name}: {s:?} is not a number")).into()))
        .collect()
}

pub fn gen(args: &GenArgs) -> Result<()> {
    let inst = match args.family {
        Family::Random => random_instance(args.n, args.k, args.dist, args.seed)?,
        Family::GreedyFailure => lab::gen_greedy_failure(args.m)?,
        Family::Knapsack => {
            let values = parse_list("values", args.values.as_deref())?;
            let weights = parse_list("weights", args.weights.as_deref())?;
            let capacity = args.capacity.context("--capacity is required for this family")?;
            lab::gen_knapsack_xos(&values, &weights, capacity)?
        }
        Family::WellPriced => {
            let base = match &args.input {
                Some(path) => load(path)?,
                None => random_instance(args.n, args.k, args.dist, args.seed)?,
            };
            lab::make_well_priced(&base)?
        }
        Family::Separated => lab::gen_separated(args.n, args.k, args.epsilon0, args.seed)?,
    };
    let text = write_instance(&inst);
    match &args.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => print!("{text}"),
    }
    Ok(())
}

struct Row {
    n: usize,
    k: usize,
    algo: Algo,
    value: f64,
    oracle: f64,
    wall_ms: f64,
}

fn bench_trial(args: &BenchArgs, seed: u64) -> Result<Vec<Row>> {
    let inst = match args.family {
        Family::Random => random_instance(args.n, args.k, args.dist, seed)?,
        Family::Separated => lab::gen_separated(args.n, args.k, 0.05, seed)?,
        other => bail!("bench supports the random and separated families, not {other:?}"),
    };
    let oracle = brute_force_optimal_as::<f64>(&inst, Objective::Revenue)?.value;
    let mut rows = Vec::with_capacity(args.algos.len());
    for &algo in &args.algos {
        let start = Instant::now();
        let out = run(&inst, algo, Objective::Revenue, None, false)?;
        let wall_ms = start.elapsed().as_secs_f64() * 1e3;
        // Score the assortment itself, not the solver's own (possibly surrogate) value.
        let value = expected_revenue(&inst, out.assortment)?;
        rows.push(Row { n: args.n, k: args.k, algo, value, oracle, wall_ms });
    }
    Ok(rows)
}

pub fn bench(args: &BenchArgs) -> Result<()> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(jobs) = args.jobs {
        builder = builder.num_threads(jobs);
    }
    let pool = builder.build()?;
    let seeds: Vec<u64> = (0..args.trials).map(|t| args.seed + t).collect();
    let trials: Vec<Vec<Row>> =
        pool.install(|| seeds.par_iter().map(|&s| bench_trial(args, s)).collect::<Result<_>>())?;
    println!("n,k,algo,value,oracle,ratio,wall_ms");
    for row in trials.iter().flatten() {
        let ratio = if row.oracle > 0.0 { row.value / row.oracle } else { 1.0 };
        println!(
            "{},{},{},{},{},{},{:.3}",
            row.n,
            row.k,
            algo_name(row.algo),
            format_float(row.value),
            format_float(row.oracle),
            format_float(ratio),
            row.wall_ms
        );
    }
    Ok(())
}
