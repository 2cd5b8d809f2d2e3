//! Buyer behavior: the demand oracle, the undominated-option frontier of an
//! assortment, and expected revenue and welfare.
//!
//! Ties between bundles of equal utility go to the higher-priced bundle, then
//! to the smaller bitmask. Consistently, a type sitting exactly on a
//! breakpoint buys the more expensive option, so the mass of option `i` is
//! `F(w_{i+1}-) - F(w_i-)`.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::model::{Instance, TypeDistribution, Valuation, MAX_TABLE_ITEMS};
use crate::scalar::Scalar;
use crate::subset::ItemSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Objective {
    Revenue,
    Welfare,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FrontierOption<S = f64> {
    pub value: S,
    pub price: S,
    pub bundle: ItemSet,
}

/// Undominated options in increasing value and price, starting with the
/// empty bundle; `breakpoints[i]` is where option `i + 1` takes over.
#[derive(Clone, Debug, PartialEq)]
pub struct Frontier<S = f64> {
    pub options: Vec<FrontierOption<S>>,
    pub breakpoints: Vec<S>,
    pub warnings: Vec<String>,
}

fn value_of<S: Scalar>(inst: &Instance, set: ItemSet) -> S {
    inst.valuation().value_as::<S>(set)
}

fn price_of<S: Scalar>(inst: &Instance, set: ItemSet) -> S {
    set.iter().fold(S::zero(), |acc, i| acc + S::lift(inst.price(i)))
}

fn check_subset(inst: &Instance, t: ItemSet) -> Result<()> {
    if !t.is_subset_of(inst.all_items()) {
        return Err(Error::InvalidInstance(format!("assortment {t:?} names unknown items")));
    }
    Ok(())
}

/// Utility-maximizing bundle of `t` at type `w`.
pub fn best_bundle(inst: &Instance, t: ItemSet, w: f64) -> Result<ItemSet> {
    best_bundle_as::<f64>(inst, t, &w)
}

pub fn best_bundle_as<S: Scalar>(inst: &Instance, t: ItemSet, w: &S) -> Result<ItemSet> {
    check_subset(inst, t)?;
    let tol = inst.tolerance();
    match inst.valuation() {
        Valuation::Additive { values } => Ok(top_margin_bundle(inst, values, t.len(), t, w, tol)),
        Valuation::AdditiveKDemand { values, k } => Ok(top_margin_bundle(inst, values, *k, t, w, tol)),
        _ => {
            if t.len() > MAX_TABLE_ITEMS {
                return Err(Error::AssortmentTooLarge(t.len()));
            }
            let mut best = ItemSet::EMPTY;
            let mut best_u = S::zero();
            let mut best_p = S::zero();
            for s in t.subsets().skip(1) {
                let p = price_of::<S>(inst, s);
                let u = w.clone() * value_of::<S>(inst, s) - p.clone();
                let better = match u.cmp_tol(&best_u, tol) {
                    Ordering::Greater => true,
                    Ordering::Equal => p > best_p,
                    Ordering::Less => false,
                };
                if better {
                    best = s;
                    best_u = u;
                    best_p = p;
                }
            }
            Ok(best)
        }
    }
}

/// Top-`k` items by margin `w v_i - p_i`, keeping only nonnegative margins.
/// Zero-margin items are taken when they cost something, per the tie rule.
fn top_margin_bundle<S: Scalar>(inst: &Instance, values: &[f64], k: usize, t: ItemSet, w: &S, tol: f64) -> ItemSet {
    let mut cands: Vec<(S, usize)> = t
        .iter()
        .filter_map(|i| {
            let m = w.clone() * S::lift(values[i]) - S::lift(inst.price(i));
            match m.cmp_tol(&S::zero(), tol) {
                Ordering::Greater => Some((m, i)),
                Ordering::Equal if inst.price(i) > 0.0 => Some((S::zero(), i)),
                _ => None,
            }
        })
        .collect();
    cands.sort_by(|a, b| {
        b.0.cmp_tol(&a.0, tol).then_with(|| inst.price(b.1).total_cmp(&inst.price(a.1))).then(a.1.cmp(&b.1))
    });
    cands.into_iter().take(k).map(|c| c.1).collect()
}

/// `max_S w v(S) - price(S)` over bundles of `t`.
pub fn utility_at(inst: &Instance, t: ItemSet, w: f64) -> Result<f64> {
    let s = best_bundle(inst, t, w)?;
    Ok(w * inst.valuation().value(s) - inst.price_of(s))
}

pub fn frontier(inst: &Instance, t: ItemSet) -> Result<Frontier<f64>> {
    frontier_as::<f64>(inst, t)
}

pub fn frontier_as<S: Scalar>(inst: &Instance, t: ItemSet) -> Result<Frontier<S>> {
    check_subset(inst, t)?;
    let tol = inst.tolerance();
    let bundles: Vec<ItemSet> = match inst.valuation() {
        Valuation::Additive { values } | Valuation::AdditiveKDemand { values, .. } => {
            midpoint_bundles::<S>(inst, values, t)?
        }
        _ => {
            if t.len() > MAX_TABLE_ITEMS {
                return Err(Error::AssortmentTooLarge(t.len()));
            }
            t.subsets().skip(1).collect()
        }
    };
    let mut cands: Vec<FrontierOption<S>> = bundles
        .into_iter()
        .map(|b| FrontierOption { value: value_of::<S>(inst, b), price: price_of::<S>(inst, b), bundle: b })
        .filter(|o| o.value.cmp_tol(&S::zero(), tol) == Ordering::Greater)
        .collect();
    // Increasing value, then cheapest first, then smallest mask.
    cands.sort_by(|a, b| {
        a.value.cmp_tol(&b.value, tol).then_with(|| a.price.cmp_tol(&b.price, tol)).then(a.bundle.cmp(&b.bundle))
    });
    let mut collapsed = 0usize;
    let mut per_value: Vec<FrontierOption<S>> = Vec::new();
    for c in cands {
        if let Some(last) = per_value.last() {
            if last.value.cmp_tol(&c.value, tol) == Ordering::Equal {
                if last.price.cmp_tol(&c.price, tol) == Ordering::Equal {
                    collapsed += 1;
                }
                continue;
            }
        }
        per_value.push(c);
    }
    let mut options = vec![FrontierOption { value: S::zero(), price: S::zero(), bundle: ItemSet::EMPTY }];
    let mut breakpoints: Vec<S> = Vec::new();
    for c in per_value {
        loop {
            let top = options.last().unwrap();
            let b = (c.price.clone() - top.price.clone()) / (c.value.clone() - top.value.clone());
            match breakpoints.last() {
                // `top` would only ever be best on a single point: drop it.
                Some(start) if b.cmp_tol(start, tol) != Ordering::Greater => {
                    options.pop();
                    breakpoints.pop();
                }
                _ => {
                    options.push(c);
                    breakpoints.push(b);
                    break;
                }
            }
        }
    }
    let mut warnings = Vec::new();
    if collapsed > 0 {
        warnings.push(format!("{collapsed} bundle(s) tied in value and price with a kept option were collapsed"));
    }
    Ok(Frontier { options, breakpoints, warnings })
}

/// Bundles chosen at one point inside every interval between consecutive
/// line crossings (lines `u = w v_i - p_i` and the zero line).
fn midpoint_bundles<S: Scalar>(inst: &Instance, values: &[f64], t: ItemSet) -> Result<Vec<ItemSet>> {
    let tol = inst.tolerance();
    let ids: Vec<usize> = t.iter().collect();
    let mut cross: Vec<S> = Vec::new();
    for (a, &i) in ids.iter().enumerate() {
        if values[i] > 0.0 {
            cross.push(S::lift(inst.price(i)) / S::lift(values[i]));
        }
        for &j in &ids[a + 1..] {
            if values[i] != values[j] {
                let w = (S::lift(inst.price(i)) - S::lift(inst.price(j))) / (S::lift(values[i]) - S::lift(values[j]));
                if w > S::zero() {
                    cross.push(w);
                }
            }
        }
    }
    cross.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    cross.dedup_by(|a, b| a.cmp_tol(b, tol) == Ordering::Equal);
    let two = S::one() + S::one();
    let mut probes: Vec<S> = Vec::with_capacity(cross.len() + 1);
    match cross.first() {
        Some(first) if first.is_positive() => probes.push(first.clone() / two.clone()),
        None => probes.push(S::one()),
        _ => {}
    }
    for pair in cross.windows(2) {
        probes.push((pair[0].clone() + pair[1].clone()) / two.clone());
    }
    if let Some(last) = cross.last() {
        probes.push(last.clone() * two.clone() + S::one());
    }
    let mut out = Vec::with_capacity(probes.len());
    for w in &probes {
        let b = best_bundle_as::<S>(inst, t, w)?;
        if !b.is_empty() && out.last() != Some(&b) {
            out.push(b);
        }
    }
    out.sort();
    out.dedup();
    Ok(out)
}

impl<S: Scalar> Frontier<S> {
    /// `E[g(purchased option)] = sum_i (g_i - g_{i-1}) (1 - F(w_i-))`.
    pub fn expected_by<G>(&self, dist: &TypeDistribution, g: G) -> Result<S>
    where
        G: Fn(&FrontierOption<S>) -> S,
    {
        let mut total = S::zero();
        let mut prev = S::zero();
        for (opt, w) in self.options[1..].iter().zip(&self.breakpoints) {
            let cur = g(opt);
            let survive = S::one() - S::cdf_in(dist, w, true)?;
            total = total + (cur.clone() - prev) * survive;
            prev = cur;
        }
        Ok(total)
    }

    pub fn revenue(&self, dist: &TypeDistribution) -> Result<S> {
        self.expected_by(dist, |o| o.price.clone())
    }

    pub fn welfare(&self, dist: &TypeDistribution) -> Result<S> {
        self.expected_by(dist, |o| o.value.clone())
    }

    /// Index of the option bought at type `w`.
    pub fn option_index_at(&self, w: &S) -> usize {
        self.breakpoints.iter().take_while(|b| *b <= w).count()
    }

    pub fn utility(&self, w: &S) -> S {
        let o = &self.options[self.option_index_at(w)];
        w.clone() * o.value.clone() - o.price.clone()
    }
}

pub fn expected_revenue(inst: &Instance, t: ItemSet) -> Result<f64> {
    frontier(inst, t)?.revenue(inst.distribution())
}

pub fn expected_welfare(inst: &Instance, t: ItemSet) -> Result<f64> {
    frontier(inst, t)?.welfare(inst.distribution())
}

pub fn evaluate(inst: &Instance, t: ItemSet, objective: Objective) -> Result<f64> {
    evaluate_as::<f64>(inst, t, objective)
}

pub fn evaluate_as<S: Scalar>(inst: &Instance, t: ItemSet, objective: Objective) -> Result<S> {
    let f = frontier_as::<S>(inst, t)?;
    match objective {
        Objective::Revenue => f.revenue(inst.distribution()),
        Objective::Welfare => f.welfare(inst.distribution()),
    }
}
