//! Combinatorial assortment optimization under multiplicative type noise.
//!
//! A seller displays a subset of priced items; each buyer draws a type `w`
//! and buys the bundle maximizing `w * v(S) - price(S)` among the displayed
//! items. The crate evaluates assortments, computes optimal ones exactly
//! (brute force, or a sweep over the line arrangement for additive k-demand),
//! approximates them for well-priced instances, and learns the needed
//! distributional quantities from simulated purchases.

pub mod choice;
pub mod dp;
pub mod error;
pub mod exact;
pub mod io;
pub mod lab;
pub mod learning;
pub mod model;
pub mod par;
pub mod scalar;
pub mod subset;
pub mod wellpriced;

pub use error::{Error, Result};
pub use model::{Arithmetic, Instance, Item, TypeDistribution, Valuation};
pub use subset::ItemSet;
