use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::choice::best_bundle;
use crate::error::Result;
use crate::model::Instance;
use crate::subset::ItemSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QueryRecord {
    pub shown: ItemSet,
    pub bought: ItemSet,
}

/// Answers demand queries against a hidden instance. Only prices are public.
#[derive(Clone, Debug)]
pub struct BuyerSimulator {
    hidden: Instance,
    rng: ChaCha8Rng,
    log: Vec<QueryRecord>,
    keep_log: bool,
    queries: usize,
}

impl BuyerSimulator {
    pub fn new(hidden: Instance, seed: u64) -> Self {
        BuyerSimulator { hidden, rng: ChaCha8Rng::seed_from_u64(seed), log: Vec::new(), keep_log: true, queries: 0 }
    }

    /// Turns the per-query log on or off; the counter is always kept.
    pub fn with_log(mut self, keep: bool) -> Self {
        self.keep_log = keep;
        self
    }

    pub fn n(&self) -> usize {
        self.hidden.n()
    }

    pub fn prices(&self) -> Vec<f64> {
        self.hidden.prices()
    }

    /// One buyer with a fresh type looks at `shown` and buys.
    pub fn query(&mut self, shown: ItemSet) -> Result<ItemSet> {
        let w = self.hidden.distribution().sample(&mut self.rng);
        let bought = best_bundle(&self.hidden, shown, w)?;
        self.queries += 1;
        if self.keep_log {
            self.log.push(QueryRecord { shown, bought });
        }
        Ok(bought)
    }

    pub fn queries(&self) -> usize {
        self.queries
    }

    pub fn log(&self) -> &[QueryRecord] {
        &self.log
    }

    /// Ends the experiment and hands back the hidden instance.
    pub fn reveal(self) -> Instance {
        self.hidden
    }
}
