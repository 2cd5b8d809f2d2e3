//! Type distributions over the buyer's value multiplier `w`.
//!
//! A distribution is used only through CDF queries (plus density where the
//! approximation algorithms need it). The CDF is right-continuous; the
//! left limit `F(w-)` is exposed separately because buyers who are exactly
//! indifferent pick the more expensive bundle, so the mass of `[w, inf)` is
//! `1 - F(w-)`.

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::scalar::{Rational, Scalar, DEFAULT_TOLERANCE};

#[derive(Clone, Debug, PartialEq)]
pub enum TypeDistribution {
    PointMass {
        at: f64,
    },
    Uniform {
        low: f64,
        high: f64,
    },
    Exponential {
        rate: f64,
    },
    /// Linear interpolation of `cdf` over `breakpoints`; `F = 0` before the
    /// first breakpoint and `F = cdf.last()` after the last one. A final value
    /// below one leaves the remaining mass at infinity.
    PiecewiseLinearCdf {
        breakpoints: Vec<f64>,
        cdf: Vec<f64>,
    },
    /// Finitely many atoms; weights are normalized on construction.
    EmpiricalCdf {
        atoms: Vec<f64>,
        weights: Vec<f64>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DistributionKind {
    PointMass,
    Uniform,
    Exponential,
    PiecewiseLinearCdf,
    EmpiricalCdf,
}

/// Outcome of a numerical regularity check.
#[derive(Clone, Debug, PartialEq)]
pub struct RegularityReport {
    pub regular: bool,
    /// First consecutive grid pair where the virtual value decreased.
    pub first_violation: Option<(f64, f64)>,
}

impl TypeDistribution {
    pub fn point_mass(at: f64) -> Result<Self> {
        let d = TypeDistribution::PointMass { at };
        d.validate()?;
        Ok(d)
    }

    pub fn uniform(low: f64, high: f64) -> Result<Self> {
        let d = TypeDistribution::Uniform { low, high };
        d.validate()?;
        Ok(d)
    }

    pub fn exponential(rate: f64) -> Result<Self> {
        let d = TypeDistribution::Exponential { rate };
        d.validate()?;
        Ok(d)
    }

    pub fn piecewise_linear(breakpoints: Vec<f64>, cdf: Vec<f64>) -> Result<Self> {
        let d = TypeDistribution::PiecewiseLinearCdf { breakpoints, cdf };
        d.validate()?;
        Ok(d)
    }

    pub fn empirical(atoms: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        let mut pairs: Vec<(f64, f64)> = atoms.into_iter().zip(weights).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total: f64 = pairs.iter().map(|p| p.1).sum();
        let d = TypeDistribution::EmpiricalCdf {
            atoms: pairs.iter().map(|p| p.0).collect(),
            weights: pairs.iter().map(|p| p.1 / total).collect(),
        };
        d.validate()?;
        Ok(d)
    }

    pub fn kind(&self) -> DistributionKind {
        match self {
            TypeDistribution::PointMass { .. } => DistributionKind::PointMass,
            TypeDistribution::Uniform { .. } => DistributionKind::Uniform,
            TypeDistribution::Exponential { .. } => DistributionKind::Exponential,
            TypeDistribution::PiecewiseLinearCdf { .. } => DistributionKind::PiecewiseLinearCdf,
            TypeDistribution::EmpiricalCdf { .. } => DistributionKind::EmpiricalCdf,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidDistribution(m.to_string()));
        match self {
            TypeDistribution::PointMass { at } => {
                if !(at.is_finite() && *at >= 0.0) {
                    return bad("point mass location must be finite and nonnegative");
                }
            }
            TypeDistribution::Uniform { low, high } => {
                if !(low.is_finite() && high.is_finite() && *low >= 0.0 && high > low) {
                    return bad("uniform needs 0 <= low < high");
                }
            }
            TypeDistribution::Exponential { rate } => {
                if !(rate.is_finite() && *rate > 0.0) {
                    return bad("exponential rate must be positive");
                }
            }
            TypeDistribution::PiecewiseLinearCdf { breakpoints, cdf } => {
                if breakpoints.is_empty() || breakpoints.len() != cdf.len() {
                    return bad("piecewise CDF needs matching, nonempty breakpoints and values");
                }
                if breakpoints[0] < 0.0 || breakpoints.windows(2).any(|w| w[1] <= w[0]) {
                    return bad("breakpoints must be nonnegative and strictly increasing");
                }
                if cdf.iter().any(|c| !(0.0..=1.0).contains(c)) || cdf.windows(2).any(|w| w[1] < w[0]) {
                    return bad("CDF values must be nondecreasing within [0, 1]");
                }
            }
            TypeDistribution::EmpiricalCdf { atoms, weights } => {
                if atoms.is_empty() || atoms.len() != weights.len() {
                    return bad("empirical CDF needs matching, nonempty atoms and weights");
                }
                if atoms.iter().any(|a| !(a.is_finite() && *a >= 0.0)) {
                    return bad("atoms must be finite and nonnegative");
                }
                if weights.iter().any(|w| !(w.is_finite() && *w >= 0.0)) {
                    return bad("weights must be nonnegative");
                }
            }
        }
        Ok(())
    }

    /// Upper end of the support (`H`); infinite for unbounded kinds.
    pub fn support_hi(&self) -> f64 {
        match self {
            TypeDistribution::PointMass { at } => *at,
            TypeDistribution::Uniform { high, .. } => *high,
            TypeDistribution::Exponential { .. } => f64::INFINITY,
            TypeDistribution::PiecewiseLinearCdf { breakpoints, cdf } => {
                if *cdf.last().unwrap() < 1.0 {
                    f64::INFINITY
                } else {
                    let first_one = cdf.iter().position(|&c| c >= 1.0).unwrap();
                    breakpoints[first_one]
                }
            }
            TypeDistribution::EmpiricalCdf { atoms, weights } => {
                atoms.iter().zip(weights).filter(|(_, w)| **w > 0.0).map(|(a, _)| *a).fold(0.0, f64::max)
            }
        }
    }

    pub fn support_lo(&self) -> f64 {
        match self {
            TypeDistribution::PointMass { at } => *at,
            TypeDistribution::Uniform { low, .. } => *low,
            TypeDistribution::Exponential { .. } => 0.0,
            TypeDistribution::PiecewiseLinearCdf { breakpoints, .. } => breakpoints[0],
            TypeDistribution::EmpiricalCdf { atoms, weights } => {
                atoms.iter().zip(weights).find(|(_, w)| **w > 0.0).map_or(0.0, |(a, _)| *a)
            }
        }
    }

    pub fn has_atoms(&self) -> bool {
        match self {
            TypeDistribution::PointMass { .. } | TypeDistribution::EmpiricalCdf { .. } => true,
            TypeDistribution::PiecewiseLinearCdf { cdf, .. } => cdf[0] > 0.0 || *cdf.last().unwrap() < 1.0,
            _ => false,
        }
    }

    pub fn cdf(&self, w: f64) -> f64 {
        match self {
            TypeDistribution::PointMass { at } => {
                if w >= *at {
                    1.0
                } else {
                    0.0
                }
            }
            TypeDistribution::Uniform { low, high } => ((w - low) / (high - low)).clamp(0.0, 1.0),
            TypeDistribution::Exponential { rate } => {
                if w <= 0.0 {
                    0.0
                } else {
                    -(-rate * w).exp_m1()
                }
            }
            TypeDistribution::PiecewiseLinearCdf { breakpoints, cdf } => pl_cdf(breakpoints, cdf, w),
            TypeDistribution::EmpiricalCdf { atoms, weights } => {
                atoms.iter().zip(weights).take_while(|(a, _)| **a <= w).map(|(_, p)| *p).sum::<f64>().min(1.0)
            }
        }
    }

    /// Left limit `F(w-) = Pr[type < w]`.
    pub fn cdf_left(&self, w: f64) -> f64 {
        match self {
            TypeDistribution::PointMass { at } => {
                if w > *at {
                    1.0
                } else {
                    0.0
                }
            }
            TypeDistribution::PiecewiseLinearCdf { breakpoints, cdf } => {
                if w <= breakpoints[0] {
                    0.0
                } else {
                    pl_cdf(breakpoints, cdf, w)
                }
            }
            TypeDistribution::EmpiricalCdf { atoms, weights } => {
                atoms.iter().zip(weights).take_while(|(a, _)| **a < w).map(|(_, p)| *p).sum::<f64>().min(1.0)
            }
            _ => self.cdf(w),
        }
    }

    /// Exact CDF for kinds whose CDF is rational at rational points.
    pub fn cdf_exact(&self, w: &Rational) -> Result<Rational> {
        self.cdf_exact_impl(w, false)
    }

    pub fn cdf_left_exact(&self, w: &Rational) -> Result<Rational> {
        self.cdf_exact_impl(w, true)
    }

    fn cdf_exact_impl(&self, w: &Rational, left: bool) -> Result<Rational> {
        let q = Rational::lift;
        let one = <Rational as Scalar>::one();
        let zero = <Rational as Scalar>::zero();
        let past = |x: &Rational| if left { w > x } else { w >= x };
        Ok(match self {
            TypeDistribution::PointMass { at } => {
                if past(&q(*at)) {
                    one
                } else {
                    zero
                }
            }
            TypeDistribution::Uniform { low, high } => {
                let (a, b) = (q(*low), q(*high));
                if *w <= a {
                    zero
                } else if *w >= b {
                    one
                } else {
                    (w - &a) / (b - a)
                }
            }
            TypeDistribution::Exponential { .. } => {
                return Err(Error::ExactUnavailable("exponential CDF is not rational".into()))
            }
            TypeDistribution::PiecewiseLinearCdf { breakpoints, cdf } => {
                let x0 = q(breakpoints[0]);
                if *w < x0 || (left && *w == x0) {
                    zero
                } else {
                    let last = breakpoints.len() - 1;
                    if *w >= q(breakpoints[last]) {
                        q(cdf[last])
                    } else {
                        let j = breakpoints.iter().rposition(|&b| q(b) <= *w).unwrap();
                        let (xa, xb) = (q(breakpoints[j]), q(breakpoints[j + 1]));
                        let (fa, fb) = (q(cdf[j]), q(cdf[j + 1]));
                        fa.clone() + (fb - fa) * (w - &xa) / (xb - xa)
                    }
                }
            }
            TypeDistribution::EmpiricalCdf { atoms, weights } => {
                let total = weights.iter().fold(zero.clone(), |acc, &p| acc + q(p));
                let below =
                    atoms.iter().zip(weights).filter(|(a, _)| past(&q(**a))).fold(zero, |acc, (_, &p)| acc + q(p));
                if total.is_zero() {
                    below
                } else {
                    below / total
                }
            }
        })
    }

    /// Density where it exists; `None` at atoms or for atomic kinds.
    pub fn density(&self, w: f64) -> Option<f64> {
        match self {
            TypeDistribution::PointMass { .. } | TypeDistribution::EmpiricalCdf { .. } => None,
            TypeDistribution::Uniform { low, high } => {
                Some(if w >= *low && w <= *high { 1.0 / (high - low) } else { 0.0 })
            }
            TypeDistribution::Exponential { rate } => Some(if w < 0.0 { 0.0 } else { rate * (-rate * w).exp() }),
            TypeDistribution::PiecewiseLinearCdf { breakpoints, cdf } => {
                if w == breakpoints[0] && cdf[0] > 0.0 {
                    return None;
                }
                if w < breakpoints[0] || w >= *breakpoints.last().unwrap() {
                    return Some(0.0);
                }
                let j = breakpoints.iter().rposition(|&b| b <= w).unwrap();
                Some((cdf[j + 1] - cdf[j]) / (breakpoints[j + 1] - breakpoints[j]))
            }
        }
    }

    /// Revenue curve `R(w) = w (1 - F(w))`.
    pub fn revenue(&self, w: f64) -> f64 {
        w * (1.0 - self.cdf(w))
    }

    /// `w (1 - F(w-))`: revenue from a unit-value item priced at `w` when ties buy.
    pub fn revenue_left(&self, w: f64) -> f64 {
        w * (1.0 - self.cdf_left(w))
    }

    pub fn virtual_value(&self, w: f64) -> Result<f64> {
        match self.density(w) {
            Some(f) if f > 0.0 => Ok(w - (1.0 - self.cdf(w)) / f),
            _ => Err(Error::DensityUndefined(w)),
        }
    }

    /// Inverse CDF, `inf { w : F(w) >= u }`.
    pub fn quantile(&self, u: f64) -> f64 {
        let u = u.clamp(0.0, 1.0);
        match self {
            TypeDistribution::PointMass { at } => *at,
            TypeDistribution::Uniform { low, high } => low + u * (high - low),
            TypeDistribution::Exponential { rate } => -(-u).ln_1p() / rate,
            TypeDistribution::PiecewiseLinearCdf { breakpoints, cdf } => {
                if u <= cdf[0] {
                    return breakpoints[0];
                }
                if u > *cdf.last().unwrap() {
                    return f64::INFINITY;
                }
                let j = cdf.iter().position(|&c| c >= u).unwrap();
                let (fa, fb) = (cdf[j - 1], cdf[j]);
                let (xa, xb) = (breakpoints[j - 1], breakpoints[j]);
                xa + (u - fa) / (fb - fa) * (xb - xa)
            }
            TypeDistribution::EmpiricalCdf { atoms, weights } => {
                let mut acc = 0.0;
                for (a, p) in atoms.iter().zip(weights) {
                    acc += p;
                    if acc >= u && *p > 0.0 {
                        return *a;
                    }
                }
                *atoms.last().unwrap()
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        // Open interval keeps continuous kinds away from their endpoints.
        let u: f64 = rng.gen_range(f64::EPSILON..1.0);
        self.quantile(u)
    }

    /// The revenue-maximizing reserve (the supremum over maximizers if not unique).
    pub fn myerson_reserve(&self) -> Result<f64> {
        Ok(self.reserve_and_revenue()?.0)
    }

    /// Reserve together with `sup R`.
    pub fn reserve_and_revenue(&self) -> Result<(f64, f64)> {
        match self {
            TypeDistribution::PointMass { at } => Ok((*at, *at)),
            TypeDistribution::Uniform { low, high } => {
                let r = low.max(high / 2.0);
                Ok((r, self.revenue(r)))
            }
            TypeDistribution::Exponential { rate } => {
                let r = 1.0 / rate;
                Ok((r, self.revenue(r)))
            }
            TypeDistribution::PiecewiseLinearCdf { breakpoints, cdf } => {
                if *cdf.last().unwrap() < 1.0 {
                    return Err(Error::NoFiniteReserve(
                        "CDF leaves mass at infinity, so the revenue curve is unbounded".into(),
                    ));
                }
                let mut cands: Vec<(f64, f64)> = breakpoints.iter().map(|&x| (x, self.revenue_left(x))).collect();
                for j in 0..breakpoints.len() - 1 {
                    let (xa, xb) = (breakpoints[j], breakpoints[j + 1]);
                    let slope = (cdf[j + 1] - cdf[j]) / (xb - xa);
                    if slope > 0.0 {
                        let vertex = (1.0 - cdf[j] + slope * xa) / (2.0 * slope);
                        if vertex > xa && vertex < xb {
                            cands.push((vertex, self.revenue(vertex)));
                        }
                    }
                }
                Ok(best_candidate(cands))
            }
            TypeDistribution::EmpiricalCdf { atoms, .. } => {
                Ok(best_candidate(atoms.iter().map(|&a| (a, self.revenue_left(a))).collect()))
            }
        }
    }

    /// Numerical regularity check: the virtual value must be nondecreasing across `grid`.
    pub fn check_regular(&self, grid: &[f64]) -> Result<RegularityReport> {
        let phis = grid.iter().map(|&w| self.virtual_value(w)).collect::<Result<Vec<f64>>>()?;
        for (i, pair) in phis.windows(2).enumerate() {
            if pair[1] < pair[0] - DEFAULT_TOLERANCE * pair[0].abs().max(1.0) {
                return Ok(RegularityReport { regular: false, first_violation: Some((grid[i], grid[i + 1])) });
            }
        }
        Ok(RegularityReport { regular: true, first_violation: None })
    }

    /// A finite right end for grids: the support end, or a far quantile.
    pub fn grid_hi(&self) -> f64 {
        let h = self.support_hi();
        if h.is_finite() {
            h
        } else {
            self.quantile(1.0 - 1e-9)
        }
    }
}

fn pl_cdf(xs: &[f64], fs: &[f64], w: f64) -> f64 {
    if w < xs[0] {
        return 0.0;
    }
    let last = xs.len() - 1;
    if w >= xs[last] {
        return fs[last];
    }
    let j = xs.partition_point(|&x| x <= w) - 1;
    fs[j] + (fs[j + 1] - fs[j]) * (w - xs[j]) / (xs[j + 1] - xs[j])
}

fn best_candidate(cands: Vec<(f64, f64)>) -> (f64, f64) {
    let top = cands.iter().map(|c| c.1).fold(f64::NEG_INFINITY, f64::max);
    cands.into_iter().filter(|c| c.1 >= top - DEFAULT_TOLERANCE).fold((f64::NEG_INFINITY, top), |acc, c| {
        if c.0 > acc.0 {
            (c.0, top)
        } else {
            acc
        }
    })
}
