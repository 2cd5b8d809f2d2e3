//! JSON documents for instances and results.
//!
//! Floats are written with at most 17 significant digits (enough to read
//! back the same double), exact values as `"num/den"` strings. Number fields
//! in instance files may be JSON numbers or such strings.

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};
use serde_json::{json, Number, Value};

use crate::choice::Frontier;
use crate::error::{Error, Result};
use crate::model::{Arithmetic, Instance, Item, TypeDistribution, Valuation};
use crate::scalar::{format_rational, parse_rational, Rational, Scalar, DEFAULT_TOLERANCE};
use crate::subset::ItemSet;

/// Shortest positional or scientific text with at most 17 significant digits.
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{x:.16e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format");
    let exp: i32 = exp.parse().expect("exponent");
    let (sign, mantissa) = mantissa.strip_prefix('-').map_or(("", mantissa), |m| ("-", m));
    let digits: String = mantissa.chars().filter(|c| *c != '.').collect();
    let digits = digits.trim_end_matches('0');
    if !(-6..17).contains(&exp) {
        let (head, tail) = digits.split_at(1);
        return if tail.is_empty() { format!("{sign}{head}e{exp}") } else { format!("{sign}{head}.{tail}e{exp}") };
    }
    if exp < 0 {
        return format!("{sign}0.{}{digits}", "0".repeat((-exp - 1) as usize));
    }
    let int_len = exp as usize + 1;
    if digits.len() <= int_len {
        format!("{sign}{digits}{}", "0".repeat(int_len - digits.len()))
    } else {
        format!("{sign}{}.{}", &digits[..int_len], &digits[int_len..])
    }
}

/// A finite float as a JSON number; non-finite values become strings.
pub fn float_json(x: f64) -> Value {
    if !x.is_finite() {
        return Value::String(x.to_string());
    }
    Value::Number(format_float(x).parse::<Number>().expect("valid number text"))
}

/// JSON for a solver value: numbers for floats, `"num/den"` for rationals.
pub fn scalar_json<S: Scalar + 'static>(x: &S) -> Value {
    match (x as &dyn std::any::Any).downcast_ref::<Rational>() {
        Some(r) => Value::String(format_rational(r)),
        None => float_json(x.to_float()),
    }
}

pub fn set_json(set: ItemSet) -> Value {
    Value::Array(set.iter().map(|i| json!(i)).collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Num(f64);

impl Serialize for Num {
    fn serialize<Z: Serializer>(&self, s: Z) -> std::result::Result<Z::Ok, Z::Error> {
        float_json(self.0).serialize(s)
    }
}

impl<'de> Deserialize<'de> for Num {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        match Value::deserialize(d)? {
            Value::Number(n) => n.as_f64().map(Num).ok_or_else(|| de::Error::custom("number out of range")),
            Value::String(s) => parse_rational(&s)
                .map(|r| Num(r.to_float()))
                .ok_or_else(|| de::Error::custom(format!("not a number: {s:?}"))),
            other => Err(de::Error::custom(format!("expected a number, got {other}"))),
        }
    }
}

fn nums(xs: &[f64]) -> Vec<Num> {
    xs.iter().copied().map(Num).collect()
}

fn floats(xs: Vec<Num>) -> Vec<f64> {
    xs.into_iter().map(|x| x.0).collect()
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ItemDoc {
    id: usize,
    price: Num,
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum ValuationDoc {
    Additive { values: Vec<Num> },
    AdditiveKDemand { values: Vec<Num>, k: usize },
    Xos { clauses: Vec<Vec<Num>> },
    ExplicitTable { values: Vec<Num> },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
enum DistributionDoc {
    PointMass { at: Num },
    Uniform { low: Num, high: Num },
    Exponential { rate: Num },
    PiecewiseLinearCdf { breakpoints: Vec<Num>, cdf: Vec<Num> },
    EmpiricalCdf { atoms: Vec<Num>, weights: Vec<Num> },
}

#[derive(Serialize, Deserialize, Clone, Copy, PartialEq, Eq)]
#[serde(rename_all = "snake_case")]
enum ArithmeticDoc {
    Float,
    Exact,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceDoc {
    items: Vec<ItemDoc>,
    valuation: ValuationDoc,
    distribution: DistributionDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    ell: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    arithmetic: Option<ArithmeticDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    tolerance: Option<f64>,
}

fn valuation_doc(v: &Valuation) -> ValuationDoc {
    match v {
        Valuation::Additive { values } => ValuationDoc::Additive { values: nums(values) },
        Valuation::AdditiveKDemand { values, k } => ValuationDoc::AdditiveKDemand { values: nums(values), k: *k },
        Valuation::Xos { clauses } => ValuationDoc::Xos { clauses: clauses.iter().map(|c| nums(c)).collect() },
        Valuation::ExplicitTable { values } => ValuationDoc::ExplicitTable { values: nums(values) },
    }
}

fn distribution_doc(d: &TypeDistribution) -> DistributionDoc {
    match d {
        TypeDistribution::PointMass { at } => DistributionDoc::PointMass { at: Num(*at) },
        TypeDistribution::Uniform { low, high } => DistributionDoc::Uniform { low: Num(*low), high: Num(*high) },
        TypeDistribution::Exponential { rate } => DistributionDoc::Exponential { rate: Num(*rate) },
        TypeDistribution::PiecewiseLinearCdf { breakpoints, cdf } => {
            DistributionDoc::PiecewiseLinearCdf { breakpoints: nums(breakpoints), cdf: nums(cdf) }
        }
        TypeDistribution::EmpiricalCdf { atoms, weights } => {
            DistributionDoc::EmpiricalCdf { atoms: nums(atoms), weights: nums(weights) }
        }
    }
}

fn into_valuation(doc: ValuationDoc) -> Valuation {
    match doc {
        ValuationDoc::Additive { values } => Valuation::additive(floats(values)),
        ValuationDoc::AdditiveKDemand { values, k } => Valuation::k_demand(floats(values), k),
        ValuationDoc::Xos { clauses } => Valuation::Xos { clauses: clauses.into_iter().map(floats).collect() },
        ValuationDoc::ExplicitTable { values } => Valuation::ExplicitTable { values: floats(values) },
    }
}

fn into_distribution(doc: DistributionDoc) -> Result<TypeDistribution> {
    match doc {
        DistributionDoc::PointMass { at } => TypeDistribution::point_mass(at.0),
        DistributionDoc::Uniform { low, high } => TypeDistribution::uniform(low.0, high.0),
        DistributionDoc::Exponential { rate } => TypeDistribution::exponential(rate.0),
        DistributionDoc::PiecewiseLinearCdf { breakpoints, cdf } => {
            TypeDistribution::piecewise_linear(floats(breakpoints), floats(cdf))
        }
        DistributionDoc::EmpiricalCdf { atoms, weights } => TypeDistribution::empirical(floats(atoms), floats(weights)),
    }
}

/// Parses and validates an instance document.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let doc: InstanceDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let n = doc.items.len();
    let items = doc.items.into_iter().map(|it| Item { id: it.id, price: it.price.0 }).collect();
    let arithmetic = match (doc.arithmetic.unwrap_or(ArithmeticDoc::Float), doc.tolerance) {
        (ArithmeticDoc::Exact, _) => Arithmetic::Exact,
        (ArithmeticDoc::Float, tol) => Arithmetic::Float { tolerance: tol.unwrap_or(DEFAULT_TOLERANCE) },
    };
    Instance::new(
        items,
        into_valuation(doc.valuation),
        into_distribution(doc.distribution)?,
        doc.ell.unwrap_or(n),
        arithmetic,
    )
}

fn instance_doc(inst: &Instance) -> InstanceDoc {
    let (arithmetic, tolerance) = match inst.arithmetic() {
        Arithmetic::Exact => (ArithmeticDoc::Exact, None),
        Arithmetic::Float { tolerance } => {
            (ArithmeticDoc::Float, (tolerance != DEFAULT_TOLERANCE).then_some(tolerance))
        }
    };
    InstanceDoc {
        items: inst.items().iter().map(|it| ItemDoc { id: it.id, price: Num(it.price) }).collect(),
        valuation: valuation_doc(inst.valuation()),
        distribution: distribution_doc(inst.distribution()),
        ell: Some(inst.ell()),
        arithmetic: Some(arithmetic),
        tolerance,
    }
}

pub fn instance_json(inst: &Instance) -> Value {
    serde_json::to_value(instance_doc(inst)).expect("instance serializes")
}

/// Pretty-printed instance document with a trailing newline.
pub fn write_instance(inst: &Instance) -> String {
    let mut s = serde_json::to_string_pretty(&instance_doc(inst)).expect("instance serializes");
    s.push('\n');
    s
}

/// Frontier as `{options: [{value, price, bundle}], breakpoints}`.
pub fn frontier_json<S: Scalar>(f: &Frontier<S>) -> Value {
    let options: Vec<Value> = f
        .options
        .iter()
        .map(|o| json!({"value": scalar_json(&o.value), "price": scalar_json(&o.price), "bundle": set_json(o.bundle)}))
        .collect();
    json!({
        "options": options,
        "breakpoints": f.breakpoints.iter().map(scalar_json).collect::<Vec<_>>(),
    })
}
