//! Rounding the revenue curve (and the density) to powers of `1 + eps`.

use crate::error::{Error, Result};
use crate::model::TypeDistribution;

/// Bit bound used for the level floor in float mode.
pub const BIT_BOUND: u64 = 64;
/// Bisection steps when locating a segment boundary.
pub const BISECTION_STEPS: usize = 64;
/// Grid size used to confirm that a curve does not increase.
const MONOTONE_GRID: usize = 1024;

/// One maximal interval `[start, end)` on which the rounded curve is constant.
#[derive(Clone, Debug, PartialEq)]
pub struct Segment {
    pub start: f64,
    pub end: f64,
    pub exponent: u64,
    pub level: f64,
}

/// Step function `R*(w)`: the smallest `R(w_min) / (1 + eps)^i >= R(w)` with
/// `i` at most the floor exponent.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundedRevenueCurve {
    pub w_min: f64,
    pub epsilon: f64,
    pub top: f64,
    pub floor_exponent: u64,
    pub segments: Vec<Segment>,
}

/// Smallest exponent `i` with `(1 + eps)^i >= 1 / eps`, capped at `B / eps^2`.
///
/// Any floor at or beyond this keeps `R* <= (1 + eps) R + eps R(w_min)`, and
/// the literal `B / eps^2` bound is far too many levels to enumerate.
pub fn effective_floor_exponent(epsilon: f64) -> u64 {
    let needed = ((1.0 / epsilon).ln() / epsilon.ln_1p()).ceil().max(1.0) as u64;
    let literal = (BIT_BOUND as f64 / (epsilon * epsilon)).floor() as u64;
    needed.min(literal.max(1))
}

fn validate_epsilon(epsilon: f64) -> Result<()> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Precondition(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    Ok(())
}

/// Level index of `x` among `top / (1 + eps)^i`, `i <= floor`, rounding up in value.
fn level_index(top: f64, x: f64, epsilon: f64, floor: u64) -> u64 {
    if x >= top {
        return 0;
    }
    if x <= 0.0 {
        return floor;
    }
    let level = |i: u64| top / (1.0 + epsilon).powf(i as f64);
    let mut i = ((top / x).ln() / epsilon.ln_1p()).floor().max(0.0) as u64;
    i = i.min(floor);
    // Fix rounding so that level(i + 1) < x <= level(i).
    while i > 0 && level(i) < x {
        i -= 1;
    }
    while i < floor && level(i + 1) >= x {
        i += 1;
    }
    i
}

/// Finite point at which `f` has dropped to `target` or below, searching right of `lo`.
fn find_upper(f: &dyn Fn(f64) -> f64, lo: f64, target: f64, hi_hint: f64) -> f64 {
    let mut hi = hi_hint.max(lo + 1.0);
    let mut tries = 0;
    while f(hi) > target && tries < 200 {
        hi = lo + 2.0 * (hi - lo);
        tries += 1;
    }
    hi
}

/// Least `w` in `[lo, hi]` with `f(w) <= target`, assuming `f` nonincreasing,
/// `f(lo) > target` and `f(hi) <= target`.
fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64, target: f64) -> f64 {
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if f(mid) <= target {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Confirms on a grid over `[from, hi]` that `f` never increases beyond tolerance.
fn check_nonincreasing(f: &dyn Fn(f64) -> f64, from: f64, hi: f64) -> Result<()> {
    if !(hi > from) {
        return Ok(());
    }
    let mut prev = f(from);
    for j in 1..=MONOTONE_GRID {
        let w = from + (hi - from) * j as f64 / MONOTONE_GRID as f64;
        let cur = f(w);
        if cur > prev + 1e-9 * prev.abs().max(1e-12) {
            return Err(Error::IncreasingRevenue { at: w, value: cur, bound: prev });
        }
        prev = cur;
    }
    Ok(())
}

/// Builds the rounded curve over `[w_min, inf)`.
pub fn round_revenue_curve(dist: &TypeDistribution, w_min: f64, epsilon: f64) -> Result<RoundedRevenueCurve> {
    validate_epsilon(epsilon)?;
    let revenue = |w: f64| dist.revenue(w);
    let top = revenue(w_min);
    let floor = effective_floor_exponent(epsilon);
    let hi = dist.grid_hi().max(w_min);
    check_nonincreasing(&revenue, w_min, hi)?;
    if top <= 0.0 {
        let seg = Segment { start: w_min, end: f64::INFINITY, exponent: floor, level: 0.0 };
        return Ok(RoundedRevenueCurve { w_min, epsilon, top, floor_exponent: floor, segments: vec![seg] });
    }
    let level = |i: u64| top / (1.0 + epsilon).powf(i as f64);
    let mut segments = Vec::new();
    let mut start = w_min;
    let mut i = level_index(top, top, epsilon, floor);
    loop {
        if i >= floor {
            segments.push(Segment { start, end: f64::INFINITY, exponent: floor, level: level(floor) });
            break;
        }
        let target = level(i + 1);
        let upper = find_upper(&revenue, start, target, hi);
        let end = bisect(&revenue, start, upper, target);
        segments.push(Segment { start, end, exponent: i, level: level(i) });
        let r = revenue(end);
        if r > top * (1.0 + 1e-9) {
            return Err(Error::IncreasingRevenue { at: end, value: r, bound: top });
        }
        start = end;
        i = level_index(top, r, epsilon, floor).max(i + 1);
    }
    Ok(RoundedRevenueCurve { w_min, epsilon, top, floor_exponent: floor, segments })
}

impl RoundedRevenueCurve {
    /// `R*(w)`; points left of `w_min` get the top level.
    pub fn value(&self, w: f64) -> f64 {
        let idx = self.segments.partition_point(|s| s.start <= w);
        self.segments[idx.saturating_sub(1)].level
    }

    pub fn levels(&self) -> usize {
        self.segments.len()
    }
}

/// Piecewise-constant density rounded down to `f0 / (1 + eps)^j`, set to zero
/// below `f0 / (1 + eps)^floor`. Segment `j` covers `[cuts[j], cuts[j + 1])`.
#[derive(Clone, Debug, PartialEq)]
pub struct RoundedDensity {
    pub cuts: Vec<f64>,
    pub levels: Vec<f64>,
}

/// Rounds a density that is nonincreasing on `[from, inf)`.
pub fn round_density(dist: &TypeDistribution, from: f64, epsilon: f64) -> Result<RoundedDensity> {
    validate_epsilon(epsilon)?;
    let hi = dist.grid_hi().max(from);
    let density = |w: f64| dist.density(w).unwrap_or(f64::NAN);
    let f0 = density(from);
    if f0.is_nan() {
        return Err(Error::Precondition(format!("density unavailable at w = {from}")));
    }
    check_nonincreasing(&density, from, hi)
        .map_err(|_| Error::Precondition("density increases after the reserve".into()))?;
    let floor = effective_floor_exponent(epsilon);
    if f0 <= 0.0 {
        return Ok(RoundedDensity { cuts: vec![from], levels: vec![0.0] });
    }
    let level = |j: u64| f0 / (1.0 + epsilon).powf(j as f64);
    // Rounding down: index j with level(j) <= f < level(j - 1); zero past the floor.
    let index = |f: f64| -> Option<u64> {
        if f <= 0.0 || f < level(floor) {
            return None;
        }
        let mut j = ((f0 / f).ln() / epsilon.ln_1p()).ceil().max(0.0) as u64;
        while j > 0 && level(j - 1) <= f {
            j -= 1;
        }
        while level(j) > f {
            j += 1;
        }
        Some(j.min(floor))
    };
    let mut cuts = vec![from];
    let mut levels = Vec::new();
    let mut start = from;
    let mut cur = index(f0);
    loop {
        let Some(j) = cur else {
            levels.push(0.0);
            break;
        };
        levels.push(level(j));
        // Leaves segment j once the density drops below level(j).
        let target = level(j) * (1.0 - 1e-15);
        let upper = find_upper(&density, start, target, hi);
        let end = bisect(&density, start, upper, target);
        cuts.push(end);
        start = end;
        cur = index(density(end)).map(|n| n.max(j + 1));
        if cur.is_some_and(|n| n > floor) {
            cur = None;
        }
    }
    Ok(RoundedDensity { cuts, levels })
}

impl RoundedDensity {
    pub fn value(&self, w: f64) -> f64 {
        let idx = self.cuts.partition_point(|&c| c <= w);
        if idx == 0 {
            self.levels[0]
        } else {
            self.levels[idx - 1]
        }
    }
}
