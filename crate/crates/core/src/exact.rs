//! Ground-truth solvers: exhaustive search, the size-bounded search that is
//! exact under a concave revenue curve, and the plain marginal-revenue greedy
//! used as a baseline.

use std::cmp::Ordering;

use crate::choice::{evaluate_as, frontier, Objective};
use crate::error::{Error, Result};
use crate::model::{Instance, Valuation};
use crate::par;
use crate::scalar::Scalar;
use crate::subset::ItemSet;

/// Brute force limit for additive and additive k-demand valuations.
pub const MAX_BRUTE_FORCE_K_DEMAND: usize = 16;
/// Brute force limit for the other valuation kinds.
pub const MAX_BRUTE_FORCE_OTHER: usize = 12;

#[derive(Clone, Debug, PartialEq)]
pub struct Solution<S = f64> {
    pub assortment: ItemSet,
    pub value: S,
    pub warnings: Vec<String>,
}

fn brute_force_limit(v: &Valuation) -> usize {
    match v {
        Valuation::Additive { .. } | Valuation::AdditiveKDemand { .. } => MAX_BRUTE_FORCE_K_DEMAND,
        _ => MAX_BRUTE_FORCE_OTHER,
    }
}

/// Objective value of every assortment with at most `max_size` items,
/// indexed by bitmask (`None` for larger ones).
pub fn assortment_values_as<S: Scalar>(
    inst: &Instance,
    objective: Objective,
    max_size: usize,
) -> Result<Vec<Option<S>>> {
    let n = inst.n();
    let limit = brute_force_limit(inst.valuation());
    if n > limit {
        return Err(Error::BruteForceInfeasible { n, limit });
    }
    par::map_range(0..1u64 << n, |b| {
        let t = ItemSet(b);
        if t.len() > max_size {
            Ok(None)
        } else {
            evaluate_as::<S>(inst, t, objective).map(Some)
        }
    })
    .into_iter()
    .collect()
}

/// Best entry of a value table among assortments of at most `ell` items;
/// ties go to the smallest bitmask.
pub fn best_in_table<S: Scalar>(table: &[Option<S>], ell: usize, tol: f64) -> (ItemSet, S) {
    let mut best = (ItemSet::EMPTY, S::zero());
    for (b, v) in table.iter().enumerate() {
        let t = ItemSet(b as u64);
        if let Some(v) = v {
            if t.len() <= ell && v.cmp_tol(&best.1, tol) == Ordering::Greater {
                best = (t, v.clone());
            }
        }
    }
    best
}

/// Exhaustive optimum over assortments of at most `ell` items.
pub fn brute_force_optimal(inst: &Instance, objective: Objective) -> Result<Solution> {
    brute_force_optimal_as::<f64>(inst, objective)
}

pub fn brute_force_optimal_as<S: Scalar>(inst: &Instance, objective: Objective) -> Result<Solution<S>> {
    let table = assortment_values_as::<S>(inst, objective, inst.ell())?;
    let (assortment, value) = best_in_table(&table, inst.ell(), inst.tolerance());
    Ok(Solution { assortment, value, warnings: Vec::new() })
}

/// Number of grid points used to certify concavity of the revenue curve.
pub const CONCAVITY_GRID: usize = 512;

/// Checks concavity of `R` on `[0, H]` by slopes between consecutive points
/// of a uniform grid merged with `extra` points.
pub fn revenue_is_concave(inst: &Instance, extra: &[f64]) -> std::result::Result<(), String> {
    let dist = inst.distribution();
    let hi = dist.grid_hi();
    let mut pts: Vec<f64> = (0..CONCAVITY_GRID).map(|i| hi * i as f64 / (CONCAVITY_GRID - 1) as f64).collect();
    pts.extend(extra.iter().copied().filter(|&w| w > 0.0 && w < hi));
    pts.sort_by(f64::total_cmp);
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-12 * hi.max(1.0));
    let vals: Vec<f64> = pts.iter().map(|&w| dist.revenue(w)).collect();
    let slopes: Vec<f64> = (1..pts.len()).map(|j| (vals[j] - vals[j - 1]) / (pts[j] - pts[j - 1])).collect();
    let tol = inst.tolerance().max(1e-12);
    for j in 1..slopes.len() {
        if slopes[j] > slopes[j - 1] + tol * slopes[j - 1].abs().max(1.0) {
            return Err(format!("revenue curve not concave near w = {}", pts[j]));
        }
    }
    Ok(())
}

/// Best assortment of at most `min(k, ell)` items; optimal when the revenue
/// curve is concave.
pub fn concave_small_search(inst: &Instance) -> Result<Solution> {
    let k = match inst.valuation() {
        Valuation::AdditiveKDemand { k, .. } => *k,
        Valuation::Additive { values } => values.len(),
        _ => return Err(Error::HypothesisViolated("valuation is not additive k-demand".into())),
    };
    let f = frontier(inst, inst.all_items())?;
    revenue_is_concave(inst, &f.breakpoints).map_err(Error::HypothesisViolated)?;
    let bound = k.min(inst.ell());
    let cands: Vec<ItemSet> = inst.all_items().subsets_up_to(bound).collect();
    let vals = par::map_slice(&cands, |&t| evaluate_as::<f64>(inst, t, Objective::Revenue));
    let tol = inst.tolerance();
    let mut best = (ItemSet::EMPTY, 0.0);
    for (t, v) in cands.into_iter().zip(vals) {
        let v = v?;
        match v.cmp_tol(&best.1, tol) {
            Ordering::Greater => best = (t, v),
            Ordering::Equal if t < best.0 => best = (t, best.1),
            _ => {}
        }
    }
    Ok(Solution { assortment: best.0, value: best.1, warnings: Vec::new() })
}

/// Repeatedly adds the item with the largest revenue gain (smallest id on
/// ties) while the gain is positive and fewer than `ell` items are shown.
pub fn marginal_greedy(inst: &Instance, objective: Objective) -> Result<Solution> {
    let tol = inst.tolerance();
    let mut t = ItemSet::EMPTY;
    let mut cur = 0.0;
    while t.len() < inst.ell() {
        let rest: Vec<usize> = inst.all_items().difference(t).iter().collect();
        let gains = par::map_slice_heavy(&rest, |&i| evaluate_as::<f64>(inst, t.with(i), objective));
        let mut best: Option<(usize, f64)> = None;
        for (&i, g) in rest.iter().zip(gains) {
            let g = g?;
            if best.is_none_or(|(_, b)| g.gt_tol(&b, tol)) {
                best = Some((i, g));
            }
        }
        match best {
            Some((i, v)) if v.gt_tol(&cur, tol) => {
                t = t.with(i);
                cur = v;
            }
            _ => break,
        }
    }
    Ok(Solution { assortment: t, value: cur, warnings: Vec::new() })
}
