//! Convex lower envelope of the rounded revenue curve, and assortment
//! revenue measured against it.

use crate::choice::Frontier;
use crate::error::{Error, Result};
use crate::wellpriced::rounding::RoundedRevenueCurve;

/// Convex, nonincreasing, piecewise-linear; flat after the last vertex.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvexEnvelope {
    pub vertices: Vec<(f64, f64)>,
}

/// Lower convex hull of the left corners of the steps.
pub fn convex_envelope(curve: &RoundedRevenueCurve) -> Result<ConvexEnvelope> {
    if curve.segments.is_empty() {
        return Err(Error::Precondition("rounded curve has no segments".into()));
    }
    let mut hull: Vec<(f64, f64)> = Vec::with_capacity(curve.segments.len());
    for s in &curve.segments {
        let p = (s.start, s.level);
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            // Drop `b` unless it lies strictly below the chord from `a` to `p`.
            let cross = (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
            if cross <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    Ok(ConvexEnvelope { vertices: hull })
}

impl ConvexEnvelope {
    pub fn value(&self, w: f64) -> f64 {
        let v = &self.vertices;
        let idx = v.partition_point(|p| p.0 <= w);
        if idx == 0 {
            return v[0].1;
        }
        if idx == v.len() {
            return v[v.len() - 1].1;
        }
        let (a, b) = (v[idx - 1], v[idx]);
        a.1 + (b.1 - a.1) * (w - a.0) / (b.0 - a.0)
    }

    /// Slope of the piece that starts at vertex `j` (zero after the last).
    pub fn slope_after(&self, j: usize) -> f64 {
        match (self.vertices.get(j), self.vertices.get(j + 1)) {
            (Some(a), Some(b)) => (b.1 - a.1) / (b.0 - a.0),
            _ => 0.0,
        }
    }

    pub fn tail_value(&self) -> f64 {
        self.vertices.last().map_or(0.0, |p| p.1)
    }

    /// `sum_i (v_i - v_{i-1}) Rhat(w_i)` over the frontier.
    pub fn revenue(&self, frontier: &Frontier<f64>) -> f64 {
        let mut prev = 0.0;
        let mut total = 0.0;
        for (opt, &w) in frontier.options[1..].iter().zip(&frontier.breakpoints) {
            total += (opt.value - prev) * self.value(w);
            prev = opt.value;
        }
        total
    }

    /// Same quantity written through utilities at the hull vertices:
    /// `v_top Rhat(inf) + sum_j u(x_j) (s_j - s_{j-1})`, valid when every
    /// breakpoint lies at or right of the first vertex.
    pub fn revenue_by_utilities(&self, utility: impl Fn(f64) -> f64, top_value: f64) -> f64 {
        let mut total = top_value * self.tail_value();
        for j in 1..self.vertices.len() {
            let kink = self.slope_after(j) - self.slope_after(j - 1);
            if kink != 0.0 {
                total += utility(self.vertices[j].0) * kink;
            }
        }
        total
    }
}
