//! Approximation algorithms for well-priced instances.

mod envelope;
mod greedy;
mod rounding;

pub use envelope::{convex_envelope, ConvexEnvelope};
pub use greedy::{greedy_constrained, welfare_greedy, EnvelopeObjective, WelfareObjective};
pub use rounding::{
    effective_floor_exponent, round_density, round_revenue_curve, RoundedDensity, RoundedRevenueCurve, Segment,
    BISECTION_STEPS, BIT_BOUND,
};

use crate::choice::{expected_revenue, expected_welfare};
use crate::error::{Error, Result};
use crate::model::{check_well_priced, Instance, TypeDistribution, WellPricedMode};
use crate::subset::ItemSet;

/// Grid size for the distribution-shape preconditions.
pub const SHAPE_GRID: usize = 512;

/// The epsilon at which `(1 - 1/e) / (4 + 8 eps) = 1 / 6.33`.
pub fn default_epsilon() -> f64 {
    (6.33 * (1.0 - (-1.0f64).exp()) - 4.0) / 8.0
}

/// Default epsilon for density rounding in the welfare greedy.
pub const DEFAULT_WELFARE_EPSILON: f64 = 0.01;

/// Approximation factor of the revenue greedy for a given epsilon.
pub fn greedy_guarantee(epsilon: f64) -> f64 {
    (4.0 + 8.0 * epsilon) / (1.0 - (-1.0f64).exp())
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxSolution {
    pub assortment: ItemSet,
    pub value: f64,
    /// The returned value is at least the optimum divided by this factor.
    pub guarantee: f64,
    pub warnings: Vec<String>,
}

/// Fails with the violating set unless every bundle is well-priced.
pub fn require_well_priced(inst: &Instance) -> Result<f64> {
    let mode = if inst.valuation().is_subadditive_by_construction() {
        WellPricedMode::PerItem
    } else {
        WellPricedMode::AllSubsets
    };
    let rep = check_well_priced(inst, mode)?;
    match rep.violator {
        Some(s) => Err(Error::NotWellPriced(s.to_vec())),
        None => Ok(rep.reserve),
    }
}

/// Density and revenue curve both nonincreasing on a grid right of `r`;
/// with `strict`, the distribution must also pass the regularity check.
pub fn check_tail_shape(dist: &TypeDistribution, r: f64, strict: bool) -> Result<()> {
    let hi = dist.grid_hi();
    let grid: Vec<f64> = if hi > r {
        (0..SHAPE_GRID).map(|j| r + (hi - r) * j as f64 / (SHAPE_GRID - 1) as f64).collect()
    } else {
        vec![r]
    };
    let tol = 1e-9;
    let mut prev: Option<(f64, f64)> = None;
    for &w in &grid {
        let f = dist
            .density(w)
            .ok_or_else(|| Error::Precondition(format!("density check failed: density unavailable at w = {w}")))?;
        let rev = dist.revenue(w);
        if let Some((pf, pr)) = prev {
            if f > pf + tol * pf.max(1.0) {
                return Err(Error::Precondition(format!("density check failed: density increases at w = {w}")));
            }
            if rev > pr + tol * pr.max(1.0) {
                return Err(Error::Precondition(format!("revenue check failed: revenue curve increases at w = {w}")));
            }
        }
        prev = Some((f, rev));
    }
    if strict {
        let rep = dist.check_regular(&grid)?;
        if !rep.regular {
            return Err(Error::Precondition(format!(
                "regularity check failed between {:?}",
                rep.first_violation.unwrap_or_default()
            )));
        }
    }
    Ok(())
}

/// Shows every item; within a factor 4 of the optimum for well-priced instances.
pub fn show_all(inst: &Instance, strict_regularity: bool) -> Result<ApproxSolution> {
    let r = require_well_priced(inst)?;
    check_tail_shape(inst.distribution(), r, strict_regularity)?;
    let all = inst.all_items();
    Ok(ApproxSolution { assortment: all, value: expected_revenue(inst, all)?, guarantee: 4.0, warnings: Vec::new() })
}

/// Shows every item; welfare-optimal for well-priced instances.
pub fn welfare_show_all(inst: &Instance) -> Result<ApproxSolution> {
    let r = require_well_priced(inst)?;
    check_tail_shape(inst.distribution(), r, false)?;
    let all = inst.all_items();
    Ok(ApproxSolution { assortment: all, value: expected_welfare(inst, all)?, guarantee: 1.0, warnings: Vec::new() })
}

/// Smallest per-item ratio `p_i / v({i})` over items with positive value.
pub fn w_min(inst: &Instance) -> Result<f64> {
    (0..inst.n())
        .filter(|&i| inst.valuation().singleton_value(i) > 0.0)
        .map(|i| inst.price(i) / inst.valuation().singleton_value(i))
        .min_by(f64::total_cmp)
        .ok_or_else(|| Error::Precondition("no item has positive value".into()))
}
