//! Cardinality-constrained greedy for gross-substitutes valuations, against
//! the convex revenue envelope or the rounded density.

use crate::choice::{expected_revenue, expected_welfare, frontier};
use crate::error::{Error, Result};
use crate::model::{verify_valuation_class, Instance, ValuationClass};
use crate::par;
use crate::subset::ItemSet;
use crate::wellpriced::{
    check_tail_shape, convex_envelope, default_epsilon, greedy_guarantee, require_well_priced, round_density,
    round_revenue_curve, w_min, ApproxSolution, ConvexEnvelope, RoundedDensity, RoundedRevenueCurve,
    DEFAULT_WELFARE_EPSILON,
};

fn require_gross_substitutes(inst: &Instance) -> Result<()> {
    let v = inst.valuation();
    if v.is_gross_substitutes_by_construction() || verify_valuation_class(v, ValuationClass::GrossSubstitutes)?.holds {
        Ok(())
    } else {
        Err(Error::NotGrossSubstitutes)
    }
}

/// Adds the best item while it strictly improves `objective` and room remains.
fn greedy_by<F>(inst: &Instance, objective: F) -> Result<ItemSet>
where
    F: Fn(ItemSet) -> Result<f64> + Sync,
{
    let tol = inst.tolerance();
    let mut t = ItemSet::EMPTY;
    let mut cur = 0.0f64;
    while t.len() < inst.ell() {
        let rest: Vec<usize> = inst.all_items().difference(t).iter().collect();
        let vals = par::map_slice_heavy(&rest, |&i| objective(t.with(i)));
        let mut best: Option<(usize, f64)> = None;
        for (&i, v) in rest.iter().zip(vals) {
            let v = v?;
            if best.is_none_or(|(_, b)| v > b) {
                best = Some((i, v));
            }
        }
        match best {
            Some((i, v)) if v > cur + tol * cur.abs().max(1.0) => {
                log::debug!("greedy: add item {i}, objective {v}");
                t = t.with(i);
                cur = v;
            }
            _ => break,
        }
    }
    Ok(t)
}

/// Revenue of an assortment measured against the convex envelope.
#[derive(Clone, Debug)]
pub struct EnvelopeObjective {
    pub curve: RoundedRevenueCurve,
    pub envelope: ConvexEnvelope,
}

impl EnvelopeObjective {
    pub fn new(inst: &Instance, epsilon: f64) -> Result<Self> {
        let curve = round_revenue_curve(inst.distribution(), w_min(inst)?, epsilon)?;
        let envelope = convex_envelope(&curve)?;
        Ok(EnvelopeObjective { curve, envelope })
    }

    pub fn value(&self, inst: &Instance, t: ItemSet) -> Result<f64> {
        Ok(self.envelope.revenue(&frontier(inst, t)?))
    }

    /// The same value through utilities at the hull vertices.
    pub fn value_by_utilities(&self, inst: &Instance, t: ItemSet) -> Result<f64> {
        let f = frontier(inst, t)?;
        let top = f.options.last().map_or(0.0, |o| o.value);
        Ok(self.envelope.revenue_by_utilities(|w| f.utility(&w), top))
    }
}

/// Greedy on the envelope revenue, for gross-substitutes valuations over
/// well-priced items. Reports the true expected revenue of the result.
pub fn greedy_constrained(inst: &Instance, epsilon: Option<f64>) -> Result<ApproxSolution> {
    require_gross_substitutes(inst)?;
    require_well_priced(inst)?;
    let epsilon = epsilon.unwrap_or_else(default_epsilon);
    let obj = EnvelopeObjective::new(inst, epsilon)?;
    let t = greedy_by(inst, |s| obj.value(inst, s))?;
    let mut warnings = Vec::new();
    if obj.curve.floor_exponent < (crate::wellpriced::BIT_BOUND as f64 / (epsilon * epsilon)) as u64 {
        warnings.push(format!("revenue levels floored at exponent {}", obj.curve.floor_exponent));
    }
    Ok(ApproxSolution {
        assortment: t,
        value: expected_revenue(inst, t)?,
        guarantee: greedy_guarantee(epsilon),
        warnings,
    })
}

/// Welfare of an assortment under the rounded density:
/// `sum_j f_j (u(c_{j+1}) - u(c_j))`.
#[derive(Clone, Debug)]
pub struct WelfareObjective {
    pub density: RoundedDensity,
}

impl WelfareObjective {
    pub fn new(inst: &Instance, epsilon: f64) -> Result<Self> {
        Ok(WelfareObjective { density: round_density(inst.distribution(), w_min(inst)?, epsilon)? })
    }

    pub fn value(&self, inst: &Instance, t: ItemSet) -> Result<f64> {
        let f = frontier(inst, t)?;
        let cuts = &self.density.cuts;
        let mut total = 0.0;
        for j in 0..cuts.len() - 1 {
            let level = self.density.levels[j];
            if level > 0.0 {
                total += level * (f.utility(&cuts[j + 1]) - f.utility(&cuts[j]));
            }
        }
        Ok(total)
    }
}

/// Greedy on rounded-density welfare; reports the true expected welfare.
pub fn welfare_greedy(inst: &Instance, epsilon: Option<f64>) -> Result<ApproxSolution> {
    require_gross_substitutes(inst)?;
    let r = require_well_priced(inst)?;
    check_tail_shape(inst.distribution(), r, false)?;
    let obj = WelfareObjective::new(inst, epsilon.unwrap_or(DEFAULT_WELFARE_EPSILON))?;
    let t = greedy_by(inst, |s| obj.value(inst, s))?;
    Ok(ApproxSolution { assortment: t, value: expected_welfare(inst, t)?, guarantee: 1.6, warnings: Vec::new() })
}
