use crate::error::{Error, Result};
use crate::model::{TypeDistribution, Valuation};
use crate::scalar::DEFAULT_TOLERANCE;
use crate::subset::{ItemSet, MAX_ITEMS};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Item {
    pub id: usize,
    pub price: f64,
}

/// Number system used by solvers that support both.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Arithmetic {
    Float { tolerance: f64 },
    Exact,
}

impl Default for Arithmetic {
    fn default() -> Self {
        Arithmetic::Float { tolerance: DEFAULT_TOLERANCE }
    }
}

/// A full problem: priced items, a common valuation, a type distribution and
/// a cardinality bound. `items[i].id == i` always holds.
#[derive(Clone, Debug, PartialEq)]
pub struct Instance {
    items: Vec<Item>,
    valuation: Valuation,
    distribution: TypeDistribution,
    ell: usize,
    arithmetic: Arithmetic,
}

impl Instance {
    /// Validates and builds an instance. Items may be listed in any order but
    /// ids must be exactly `0..n`.
    pub fn new(
        items: Vec<Item>,
        valuation: Valuation,
        distribution: TypeDistribution,
        ell: usize,
        arithmetic: Arithmetic,
    ) -> Result<Self> {
        let n = items.len();
        if n > MAX_ITEMS {
            return Err(Error::InvalidInstance(format!("at most {MAX_ITEMS} items are supported")));
        }
        let mut slots: Vec<Option<Item>> = vec![None; n];
        for item in items {
            if item.id >= n || slots[item.id].is_some() {
                return Err(Error::InvalidInstance(format!("item ids must be 0..{n} without repeats")));
            }
            if !(item.price.is_finite() && item.price >= 0.0) {
                return Err(Error::InvalidInstance(format!(
                    "price of item {} must be finite and nonnegative",
                    item.id
                )));
            }
            slots[item.id] = Some(item);
        }
        let items: Vec<Item> = slots.into_iter().map(|s| s.unwrap()).collect();
        valuation.validate()?;
        distribution.validate()?;
        if valuation.num_items() != n {
            return Err(Error::InvalidInstance(format!(
                "valuation covers {} items but the instance has {n}",
                valuation.num_items()
            )));
        }
        if n > 0 && !(1..=n).contains(&ell) {
            return Err(Error::InvalidInstance(format!("ell must lie in [1, {n}], got {ell}")));
        }
        if let Arithmetic::Float { tolerance } = arithmetic {
            if !(tolerance > 0.0 && tolerance.is_finite()) {
                return Err(Error::InvalidInstance("tolerance must be positive".into()));
            }
        }
        Ok(Instance { items, valuation, distribution, ell: if n == 0 { 0 } else { ell }, arithmetic })
    }

    /// Convenience constructor from parallel price list, float mode, `ell = n`.
    pub fn from_prices(prices: Vec<f64>, valuation: Valuation, distribution: TypeDistribution) -> Result<Self> {
        let n = prices.len();
        let items = prices.into_iter().enumerate().map(|(id, price)| Item { id, price }).collect();
        Instance::new(items, valuation, distribution, n.max(1), Arithmetic::default())
    }

    pub fn n(&self) -> usize {
        self.items.len()
    }

    pub fn items(&self) -> &[Item] {
        &self.items
    }

    pub fn price(&self, i: usize) -> f64 {
        self.items[i].price
    }

    pub fn prices(&self) -> Vec<f64> {
        self.items.iter().map(|it| it.price).collect()
    }

    pub fn price_of(&self, set: ItemSet) -> f64 {
        set.iter().map(|i| self.items[i].price).sum()
    }

    pub fn valuation(&self) -> &Valuation {
        &self.valuation
    }

    pub fn distribution(&self) -> &TypeDistribution {
        &self.distribution
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn arithmetic(&self) -> Arithmetic {
        self.arithmetic
    }

    pub fn tolerance(&self) -> f64 {
        match self.arithmetic {
            Arithmetic::Float { tolerance } => tolerance,
            Arithmetic::Exact => 0.0,
        }
    }

    pub fn all_items(&self) -> ItemSet {
        ItemSet::full(self.n())
    }

    /// Ids ordered by nondecreasing price, ties by id.
    pub fn price_order(&self) -> Vec<usize> {
        let mut ids: Vec<usize> = (0..self.n()).collect();
        ids.sort_by(|&a, &b| self.price(a).total_cmp(&self.price(b)).then(a.cmp(&b)));
        ids
    }

    pub fn with_ell(mut self, ell: usize) -> Result<Self> {
        let n = self.n();
        if n > 0 && !(1..=n).contains(&ell) {
            return Err(Error::InvalidInstance(format!("ell must lie in [1, {n}], got {ell}")));
        }
        self.ell = ell;
        Ok(self)
    }

    pub fn with_arithmetic(mut self, arithmetic: Arithmetic) -> Self {
        self.arithmetic = arithmetic;
        self
    }

    pub fn with_prices(&self, prices: Vec<f64>) -> Result<Self> {
        let items = prices.into_iter().enumerate().map(|(id, price)| Item { id, price }).collect();
        Instance::new(items, self.valuation.clone(), self.distribution.clone(), self.ell, self.arithmetic)
    }

    pub fn with_distribution(&self, distribution: TypeDistribution) -> Result<Self> {
        Instance::new(self.items.clone(), self.valuation.clone(), distribution, self.ell, self.arithmetic)
    }
}
