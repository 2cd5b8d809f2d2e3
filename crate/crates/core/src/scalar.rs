//! Numeric backends. Solvers that need exact breakpoint ordering are generic
//! over [`Scalar`]: `f64` compares with a tolerance, [`Rational`] compares
//! exactly.

use std::cmp::Ordering;
use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Result;
use crate::model::TypeDistribution;

pub type Rational = BigRational;

/// Default comparison tolerance in float mode.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;

pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + 'static
{
    /// Whether comparisons are exact.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    /// Lifts a float. Exact for [`Rational`]: every finite `f64` is a dyadic rational.
    fn lift(x: f64) -> Self;
    fn to_float(&self) -> f64;

    /// Three-way comparison; `f64` treats values within `tol` (scaled by magnitude) as equal.
    fn cmp_tol(&self, other: &Self, tol: f64) -> Ordering;

    fn eq_tol(&self, other: &Self, tol: f64) -> bool {
        self.cmp_tol(other, tol) == Ordering::Equal
    }

    fn gt_tol(&self, other: &Self, tol: f64) -> bool {
        self.cmp_tol(other, tol) == Ordering::Greater
    }

    fn lt_tol(&self, other: &Self, tol: f64) -> bool {
        self.cmp_tol(other, tol) == Ordering::Less
    }

    fn is_positive(&self) -> bool {
        *self > Self::zero()
    }

    /// `F(w)` (or `F(w-)` when `left`) in this number type.
    fn cdf_in(dist: &TypeDistribution, w: &Self, left: bool) -> Result<Self>;

    fn max_of(a: Self, b: Self) -> Self {
        if b > a {
            b
        } else {
            a
        }
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn zero() -> Self {
        0.0
    }

    fn one() -> Self {
        1.0
    }

    fn lift(x: f64) -> Self {
        x
    }

    fn to_float(&self) -> f64 {
        *self
    }

    fn cdf_in(dist: &TypeDistribution, w: &Self, left: bool) -> Result<Self> {
        Ok(if left { dist.cdf_left(*w) } else { dist.cdf(*w) })
    }

    fn cmp_tol(&self, other: &Self, tol: f64) -> Ordering {
        let scale = 1.0f64.max(self.abs()).max(other.abs());
        if (self - other).abs() <= tol * scale {
            Ordering::Equal
        } else if self < other {
            Ordering::Less
        } else {
            Ordering::Greater
        }
    }
}

impl Scalar for Rational {
    const EXACT: bool = true;

    fn zero() -> Self {
        Zero::zero()
    }

    fn one() -> Self {
        One::one()
    }

    fn lift(x: f64) -> Self {
        BigRational::from_float(x).expect("finite float")
    }

    fn to_float(&self) -> f64 {
        ratio_to_f64(self)
    }

    fn cdf_in(dist: &TypeDistribution, w: &Self, left: bool) -> Result<Self> {
        if left {
            dist.cdf_left_exact(w)
        } else {
            dist.cdf_exact(w)
        }
    }

    fn cmp_tol(&self, other: &Self, _tol: f64) -> Ordering {
        self.cmp(other)
    }

    fn is_positive(&self) -> bool {
        Signed::is_positive(self)
    }
}

fn ratio_to_f64(r: &Rational) -> f64 {
    if let Some(x) = ToPrimitive::to_f64(r) {
        return x;
    }
    // Fall back on scaling huge numerators/denominators.
    let n = r.numer();
    let d = r.denom();
    let shift = (n.bits().max(d.bits()) as i64 - 900).max(0) as u32;
    let n2: BigInt = n >> shift;
    let d2: BigInt = d >> shift;
    n2.to_f64().unwrap_or(f64::NAN) / d2.to_f64().unwrap_or(f64::NAN)
}

/// Formats a rational as `num/den` (or `num` for integers).
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `num/den`, `num`, or a decimal literal into an exact rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Rational::new(n, d));
    }
    if let Ok(n) = s.parse::<BigInt>() {
        return Some(Rational::from_integer(n));
    }
    let x: f64 = s.parse().ok()?;
    x.is_finite().then(|| Rational::lift(x))
}
