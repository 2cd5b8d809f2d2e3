//! Structural checks: well-pricedness and exhaustive valuation-class tests.

use crate::error::{Error, Result};
use crate::model::{Instance, Valuation};
use crate::par;
use crate::scalar::DEFAULT_TOLERANCE;
use crate::subset::ItemSet;

/// Largest item count for exhaustive class verification.
pub const MAX_VERIFY_ITEMS: usize = 12;
/// Largest item count for the all-subsets well-pricedness check.
pub const MAX_WELL_PRICED_SUBSET_ITEMS: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WellPricedMode {
    PerItem,
    AllSubsets,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WellPricedReport {
    pub well_priced: bool,
    pub reserve: f64,
    pub violator: Option<ItemSet>,
}

/// Checks `price(S) >= r * v(S)` where `r` is the Myerson reserve.
pub fn check_well_priced(inst: &Instance, mode: WellPricedMode) -> Result<WellPricedReport> {
    let reserve = inst.distribution().myerson_reserve()?;
    let tol = inst.tolerance();
    let n = inst.n();
    let violates = |set: ItemSet| {
        let lhs = inst.price_of(set);
        let rhs = reserve * inst.valuation().value(set);
        lhs < rhs - tol * lhs.abs().max(rhs.abs()).max(1.0)
    };
    let violator = match mode {
        WellPricedMode::PerItem => {
            if !inst.valuation().is_subadditive_by_construction() {
                return Err(Error::PerItemUnsound);
            }
            (0..n).map(ItemSet::singleton).find(|&s| violates(s))
        }
        WellPricedMode::AllSubsets => {
            if n > MAX_WELL_PRICED_SUBSET_ITEMS {
                return Err(Error::VerificationInfeasible(n));
            }
            par::find_first(1..1u64 << n, |b| violates(ItemSet(b)).then_some(ItemSet(b)))
        }
    };
    Ok(WellPricedReport { well_priced: violator.is_none(), reserve, violator })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValuationClass {
    Monotone,
    Submodular,
    GrossSubstitutes,
}

/// A tuple on which the defining condition failed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassWitness {
    pub s: ItemSet,
    pub t: ItemSet,
    /// The exchanged item, for the gross-substitutes condition.
    pub x: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassReport {
    pub holds: bool,
    pub witness: Option<ClassWitness>,
}

/// Exhaustively tests membership in a valuation class.
///
/// Submodularity uses the local form `v(S+i) + v(S+j) >= v(S+i+j) + v(S)`,
/// which is equivalent to the lattice inequality; the witness is `(S+i, S+j)`.
/// Gross substitutes uses the M#-exchange condition over all `S, T` and
/// `x` in `S \ T`.
pub fn verify_valuation_class(v: &Valuation, class: ValuationClass) -> Result<ClassReport> {
    let n = v.num_items();
    if n > MAX_VERIFY_ITEMS {
        return Err(Error::VerificationInfeasible(n));
    }
    let table: Vec<f64> = (0..1u64 << n).map(|b| v.value(ItemSet(b))).collect();
    let val = |s: ItemSet| table[s.0 as usize];
    let le = |a: f64, b: f64| a <= b + DEFAULT_TOLERANCE * a.abs().max(b.abs()).max(1.0);
    let full = ItemSet::full(n);

    let witness = match class {
        ValuationClass::Monotone => {
            if !le(val(ItemSet::EMPTY), 0.0) || !le(0.0, val(ItemSet::EMPTY)) {
                return Ok(ClassReport {
                    holds: false,
                    witness: Some(ClassWitness { s: ItemSet::EMPTY, t: ItemSet::EMPTY, x: None }),
                });
            }
            par::find_first(0..1u64 << n, |b| {
                let s = ItemSet(b);
                full.difference(s).iter().find(|&i| !le(val(s), val(s.with(i)))).map(|i| ClassWitness {
                    s,
                    t: s.with(i),
                    x: None,
                })
            })
        }
        ValuationClass::Submodular => par::find_first(0..1u64 << n, |b| {
            let s = ItemSet(b);
            let rest: Vec<usize> = full.difference(s).iter().collect();
            for (a, &i) in rest.iter().enumerate() {
                for &j in &rest[a + 1..] {
                    if !le(val(s.with(i).with(j)) + val(s), val(s.with(i)) + val(s.with(j))) {
                        return Some(ClassWitness { s: s.with(i), t: s.with(j), x: None });
                    }
                }
            }
            None
        }),
        ValuationClass::GrossSubstitutes => par::find_first(0..1u64 << n, |b| {
            let s = ItemSet(b);
            for t in full.subsets() {
                let lhs = val(s) + val(t);
                for x in s.difference(t).iter() {
                    let mut best = val(s.without(x)) + val(t.with(x));
                    for y in t.difference(s).iter() {
                        best = best.max(val(s.without(x).with(y)) + val(t.with(x).without(y)));
                    }
                    if !le(lhs, best) {
                        return Some(ClassWitness { s, t, x: Some(x) });
                    }
                }
            }
            None
        }),
    };
    Ok(ClassReport { holds: witness.is_none(), witness })
}
