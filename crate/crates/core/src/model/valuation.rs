use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::subset::{ItemSet, MAX_ITEMS};

/// Largest item count accepted for explicit-table valuations.
pub const MAX_TABLE_ITEMS: usize = 22;

/// Common valuation over item bundles. Bundle values are scaled by the buyer's type.
#[derive(Clone, Debug, PartialEq)]
pub enum Valuation {
    Additive {
        values: Vec<f64>,
    },
    /// Additive values, but the buyer only benefits from its `k` most valuable items.
    AdditiveKDemand {
        values: Vec<f64>,
        k: usize,
    },
    /// Maximum over additive clauses.
    Xos {
        clauses: Vec<Vec<f64>>,
    },
    /// Value of every bundle, indexed by bitmask.
    ExplicitTable {
        values: Vec<f64>,
    },
}

/// Coarse class tag used to pick sound checks and algorithms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValuationKind {
    Additive,
    AdditiveKDemand,
    Xos,
    ExplicitTable,
}

impl Valuation {
    pub fn additive(values: Vec<f64>) -> Self {
        Valuation::Additive { values }
    }

    pub fn k_demand(values: Vec<f64>, k: usize) -> Self {
        Valuation::AdditiveKDemand { values, k }
    }

    /// Builds a table by evaluating `f` on every bundle of `n` items.
    pub fn table_from_fn(n: usize, f: impl Fn(ItemSet) -> f64) -> Self {
        let values = (0..1u64 << n).map(|b| f(ItemSet(b))).collect();
        Valuation::ExplicitTable { values }
    }

    pub fn kind(&self) -> ValuationKind {
        match self {
            Valuation::Additive { .. } => ValuationKind::Additive,
            Valuation::AdditiveKDemand { .. } => ValuationKind::AdditiveKDemand,
            Valuation::Xos { .. } => ValuationKind::Xos,
            Valuation::ExplicitTable { .. } => ValuationKind::ExplicitTable,
        }
    }

    pub fn num_items(&self) -> usize {
        match self {
            Valuation::Additive { values } | Valuation::AdditiveKDemand { values, .. } => values.len(),
            Valuation::Xos { clauses } => clauses.first().map_or(0, Vec::len),
            Valuation::ExplicitTable { values } => values.len().trailing_zeros() as usize,
        }
    }

    /// Demand bound `k`, if the valuation is additive k-demand.
    pub fn demand_bound(&self) -> Option<usize> {
        match self {
            Valuation::AdditiveKDemand { k, .. } => Some(*k),
            _ => None,
        }
    }

    /// Subadditive by construction (per-item well-pricedness then implies the bundle condition).
    pub fn is_subadditive_by_construction(&self) -> bool {
        !matches!(self, Valuation::ExplicitTable { .. })
    }

    /// Gross substitutes by construction.
    pub fn is_gross_substitutes_by_construction(&self) -> bool {
        matches!(self, Valuation::Additive { .. } | Valuation::AdditiveKDemand { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidInstance(m.to_string()));
        let finite_nonneg = |v: &[f64]| v.iter().all(|x| x.is_finite() && *x >= 0.0);
        match self {
            Valuation::Additive { values } => {
                if !finite_nonneg(values) {
                    return bad("additive values must be finite and nonnegative");
                }
            }
            Valuation::AdditiveKDemand { values, k } => {
                if !finite_nonneg(values) {
                    return bad("k-demand values must be finite and nonnegative");
                }
                if *k == 0 {
                    return bad("k must be positive");
                }
            }
            Valuation::Xos { clauses } => {
                if clauses.is_empty() {
                    return bad("XOS valuation needs at least one clause");
                }
                let n = clauses[0].len();
                if clauses.iter().any(|c| c.len() != n || !finite_nonneg(c)) {
                    return bad("XOS clauses must share a length and be nonnegative");
                }
            }
            Valuation::ExplicitTable { values } => {
                if !values.len().is_power_of_two() {
                    return bad("table length must be a power of two");
                }
                if self.num_items() > MAX_TABLE_ITEMS {
                    return bad("explicit tables support at most 22 items");
                }
                if !values.iter().all(|x| x.is_finite()) {
                    return bad("table values must be finite");
                }
                if values[0] != 0.0 {
                    return bad("table must be normalized: v(empty) = 0");
                }
                let n = self.num_items();
                for b in 0..values.len() {
                    for i in 0..n {
                        if b >> i & 1 == 0 && values[b | 1 << i] < values[b] {
                            return bad("table must be monotone nondecreasing");
                        }
                    }
                }
            }
        }
        if self.num_items() > MAX_ITEMS {
            return bad("at most 64 items are supported");
        }
        Ok(())
    }

    pub fn value(&self, set: ItemSet) -> f64 {
        self.value_as::<f64>(set)
    }

    /// Bundle value in the requested numeric backend.
    pub fn value_as<S: Scalar>(&self, set: ItemSet) -> S {
        match self {
            Valuation::Additive { values } => set.iter().fold(S::zero(), |acc, i| acc + S::lift(values[i])),
            Valuation::AdditiveKDemand { values, k } => {
                let mut vs: Vec<f64> = set.iter().map(|i| values[i]).collect();
                vs.sort_by(|a, b| b.total_cmp(a));
                vs.iter().take(*k).fold(S::zero(), |acc, &v| acc + S::lift(v))
            }
            Valuation::Xos { clauses } => clauses
                .iter()
                .map(|c| set.iter().fold(S::zero(), |acc, i| acc + S::lift(c[i])))
                .fold(S::zero(), S::max_of),
            Valuation::ExplicitTable { values } => S::lift(values[set.0 as usize]),
        }
    }

    pub fn singleton_value(&self, i: usize) -> f64 {
        self.value(ItemSet::singleton(i))
    }

    /// Per-item values for the additive kinds.
    pub fn item_values(&self) -> Option<&[f64]> {
        match self {
            Valuation::Additive { values } | Valuation::AdditiveKDemand { values, .. } => Some(values),
            _ => None,
        }
    }
}
