//! Coordinate scalars: exact rationals for identity checks, `f64` for the
//! numeric functional calculus.

use std::fmt::{Debug, Display};

use num_rational::Rational64;
use num_traits::{FromPrimitive, Signed, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};

/// Exact rational scalar used by every identity check.
pub type Q = Rational64;

pub trait Scalar:
    Signed + PartialOrd + Clone + Debug + Display + FromPrimitive + Send + Sync + 'static
{
    /// Whether arithmetic on this scalar is exact.
    const EXACT: bool;

    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
    fn to_f64(&self) -> f64;

    fn min_of(a: &Self, b: &Self) -> Self {
        if b < a {
            b.clone()
        } else {
            a.clone()
        }
    }

    fn max_of(a: &Self, b: &Self) -> Self {
        if b > a {
            b.clone()
        } else {
            a.clone()
        }
    }

    fn from_int(i: i64) -> Self {
        Self::from_i64(i).expect("integer fits every scalar type")
    }
}

impl Scalar for Q {
    const EXACT: bool = true;

    fn to_json(&self) -> Value {
        Value::String(format_rational(self))
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(n) => {
                if let Some(i) = n.as_i64() {
                    Ok(Q::from_integer(i))
                } else {
                    Err(Error::Format(format!(
                        "exact coordinate {n} must be an integer or a \"p/q\" string"
                    )))
                }
            }
            other => Err(Error::Format(format!("expected rational, got {other}"))),
        }
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;

    fn to_json(&self) -> Value {
        serde_json::Number::from_f64(*self)
            .map(Value::Number)
            .unwrap_or(Value::Null)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(n) => n
                .as_f64()
                .ok_or_else(|| Error::Format(format!("bad number {n}"))),
            Value::String(s) => parse_rational(s).map(|q| Scalar::to_f64(&q)),
            other => Err(Error::Format(format!("expected number, got {other}"))),
        }
    }

    fn to_f64(&self) -> f64 {
        *self
    }
}

/// Formats as `"p"` for integers and `"p/q"` otherwise.
pub fn format_rational(q: &Q) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Q> {
    let bad = || Error::Format(format!("bad rational {s:?}"));
    let s = s.trim();
    match s.split_once('/') {
        Some((p, q)) => {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(p, q))
        }
        None => s.parse::<i64>().map(Q::from_integer).map_err(|_| bad()),
    }
}

/// Relative comparison used by numeric suites: `|a-b| <= tol * max(1, |a|, |b|)`.
pub fn approx_eq(a: f64, b: f64, tol: f64) -> bool {
    let scale = 1f64.max(a.abs()).max(b.abs());
    (a - b).abs() <= tol * scale
}
