//! The arrangement of item lines `u = v_i w - p_i` plus zero padding lines,
//! swept left to right as a sequence of adjacent transpositions.
//!
//! Lines are ordered top to bottom by utility. Starting from the order just
//! left of `w = 0`, every crossing at `w >= 0` is replayed as one swap of two
//! lines that are adjacent at that moment. Concurrent crossings are expanded
//! by sorting each block of concurrent lines into its order just right of the
//! common point, one adjacent exchange at a time. Identical lines never cross
//! and keep their index order, which is how the padding lines stay inert.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{Instance, Valuation};
use crate::scalar::Scalar;

/// A utility line. Padding lines have `item == None` and are identically zero.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Line {
    pub item: Option<usize>,
    pub slope: f64,
    pub price: f64,
}

/// Line `up` overtakes line `down` at `w`.
#[derive(Clone, Debug, PartialEq)]
pub struct Crossing<S = f64> {
    pub up: usize,
    pub down: usize,
    pub w: S,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Arrangement<S = f64> {
    /// Effective demand bound, `min(k, items with positive value)` but at least one.
    pub k: usize,
    /// `2k - 1` padding lines first, then one line per item with positive value.
    pub lines: Vec<Line>,
    /// Top to bottom, just left of `w = 0`.
    pub initial_order: Vec<usize>,
    pub events: Vec<Crossing<S>>,
    pub warnings: Vec<String>,
}

/// Largest number of lines the sweep can track in a state bitmask.
pub const MAX_LINES: usize = 128;

impl<S> Arrangement<S> {
    pub fn num_padding(&self) -> usize {
        2 * self.k - 1
    }

    pub fn item_of(&self, line: usize) -> Option<usize> {
        self.lines[line].item
    }
}

/// Values and demand bound of a k-demand valuation (plain additive counts as `k = n`).
pub fn k_demand_parts(v: &Valuation) -> Result<(&[f64], usize)> {
    match v {
        Valuation::AdditiveKDemand { values, k } => Ok((values, *k)),
        Valuation::Additive { values } => Ok((values, values.len().max(1))),
        _ => Err(Error::DpRequiresKDemand),
    }
}

/// Padding and item lines for the given values and prices.
pub fn make_lines(values: &[f64], prices: &[f64], k: usize) -> (usize, Vec<Line>) {
    let real = values.iter().filter(|&&v| v > 0.0).count();
    let k = k.min(real).max(1);
    let mut lines: Vec<Line> = (0..2 * k - 1).map(|_| Line { item: None, slope: 0.0, price: 0.0 }).collect();
    for (i, (&v, &p)) in values.iter().zip(prices).enumerate() {
        if v > 0.0 {
            lines.push(Line { item: Some(i), slope: v, price: p });
        }
    }
    (k, lines)
}

/// Order just left of `w = 0`: cheaper first, then flatter, then lower index.
pub fn initial_order(lines: &[Line]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..lines.len()).collect();
    order.sort_by(|&a, &b| {
        lines[a].price.total_cmp(&lines[b].price).then(lines[a].slope.total_cmp(&lines[b].slope)).then(a.cmp(&b))
    });
    order
}

pub fn build_arrangement(inst: &Instance) -> Result<Arrangement<f64>> {
    build_arrangement_as::<f64>(inst)
}

pub fn build_arrangement_as<S: Scalar>(inst: &Instance) -> Result<Arrangement<S>> {
    let (values, k) = k_demand_parts(inst.valuation())?;
    let (k, lines) = make_lines(values, &inst.prices(), k);
    if lines.len() > MAX_LINES {
        return Err(Error::Precondition(format!(
            "dp supports at most {MAX_LINES} lines including padding, got {}",
            lines.len()
        )));
    }
    let tol = inst.tolerance();
    let mut warnings = Vec::new();
    let pad = 2 * k - 1;
    let slope = |x: usize| S::lift(lines[x].slope);
    let price = |x: usize| S::lift(lines[x].price);

    let mut crossings: Vec<Crossing<S>> = Vec::new();
    let mut identical = 0usize;
    for a in 0..lines.len() {
        for b in (a + 1).max(pad)..lines.len() {
            let (la, lb) = (&lines[a], &lines[b]);
            if la.slope == lb.slope {
                if la.price == lb.price {
                    identical += 1;
                }
                continue;
            }
            let (up, down) = if la.slope > lb.slope { (a, b) } else { (b, a) };
            let w = (price(up) - price(down)) / (slope(up) - slope(down));
            if w >= S::zero() {
                crossings.push(Crossing { up, down, w });
            }
        }
    }
    if identical > 0 {
        warnings.push(format!(
            "{identical} pair(s) of items have identical value and price; ties between them go to the lower id"
        ));
    }
    crossings.sort_by(|a, b| a.w.partial_cmp(&b.w).unwrap_or(Ordering::Equal));

    let order = initial_order(&lines);
    let mut perm = order.clone();
    let mut pos = vec![0usize; lines.len()];
    for (p, &x) in perm.iter().enumerate() {
        pos[x] = p;
    }
    let mut events = Vec::with_capacity(crossings.len());
    let mut start = 0;
    while start < crossings.len() {
        let w = crossings[start].w.clone();
        let mut end = start + 1;
        while end < crossings.len() && crossings[end].w.cmp_tol(&crossings[end - 1].w, tol) == Ordering::Equal {
            end += 1;
        }
        // Blocks of concurrent lines; float noise may interleave them, so
        // overlapping position ranges are merged.
        let mut ranges: Vec<(usize, usize)> =
            crossings[start..end].iter().map(|c| (pos[c.up].min(pos[c.down]), pos[c.up].max(pos[c.down]))).collect();
        ranges.sort();
        let mut merged: Vec<(usize, usize)> = Vec::new();
        for r in ranges {
            match merged.last_mut() {
                Some(m) if r.0 <= m.1 => m.1 = m.1.max(r.1),
                _ => merged.push(r),
            }
        }
        let utility = |x: usize| w.clone() * slope(x) - price(x);
        // `x` belongs above `y` right after `w` (and at `w` itself, by the tie rule).
        let above = |x: usize, y: usize| {
            utility(x).cmp_tol(&utility(y), tol).then_with(|| lines[x].slope.total_cmp(&lines[y].slope)).then(y.cmp(&x))
                == Ordering::Greater
        };
        for (lo, hi) in merged {
            for i in lo + 1..=hi {
                let mut j = i;
                while j > lo && above(perm[j], perm[j - 1]) {
                    let (up, down) = (perm[j], perm[j - 1]);
                    perm.swap(j, j - 1);
                    pos[up] = j - 1;
                    pos[down] = j;
                    events.push(Crossing { up, down, w: w.clone() });
                    j -= 1;
                }
            }
        }
        start = end;
    }
    Ok(Arrangement { k, lines, initial_order: order, events, warnings })
}
