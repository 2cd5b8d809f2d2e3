//! Problem data: valuations, type distributions, instances and structural checks.

mod checks;
mod distribution;
mod instance;
mod valuation;

pub use checks::{
    check_well_priced, verify_valuation_class, ClassReport, ClassWitness, ValuationClass, WellPricedMode,
    WellPricedReport, MAX_VERIFY_ITEMS, MAX_WELL_PRICED_SUBSET_ITEMS,
};
pub use distribution::{DistributionKind, RegularityReport, TypeDistribution};
pub use instance::{Arithmetic, Instance, Item};
pub use valuation::{Valuation, ValuationKind, MAX_TABLE_ITEMS};
