//! Coordinate tuples: the finite-dimensional vector lattice ℝ^m with the
//! pointwise order.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Q};

#[derive(Debug, Clone, PartialEq)]
pub struct CoordTuple<S> {
    coords: Vec<S>,
}

pub type ExactTuple = CoordTuple<Q>;
pub type RealTuple = CoordTuple<f64>;

impl<S: Scalar> CoordTuple<S> {
    pub fn new(coords: Vec<S>) -> Self {
        CoordTuple { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        CoordTuple::new(coords.iter().map(|&c| S::from_int(c)).collect())
    }

    pub fn zeros(dim: usize) -> Self {
        CoordTuple::new(vec![S::zero(); dim])
    }

    /// Unit vector `e_i`.
    pub fn basis(dim: usize, i: usize) -> Self {
        let mut t = Self::zeros(dim);
        t.coords[i] = S::one();
        t
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<S> {
        self.coords
    }

    pub fn get(&self, i: usize) -> &S {
        &self.coords[i]
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&S, &S) -> S) -> Self {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        CoordTuple::new(self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect())
    }

    pub fn map(&self, f: impl Fn(&S) -> S) -> Self {
        CoordTuple::new(self.coords.iter().map(f).collect())
    }

    pub fn meet(&self, other: &Self) -> Self {
        self.zip_with(other, S::min_of)
    }

    pub fn join(&self, other: &Self) -> Self {
        self.zip_with(other, S::max_of)
    }

    /// Positive part `f⁺ = f ∨ 0`.
    pub fn pos(&self) -> Self {
        self.map(|c| S::max_of(c, &S::zero()))
    }

    /// Negative part `f⁻ = (-f) ∨ 0`.
    pub fn neg_part(&self) -> Self {
        self.map(|c| S::max_of(&-c.clone(), &S::zero()))
    }

    pub fn abs(&self) -> Self {
        self.map(|c| c.abs())
    }

    pub fn scale(&self, k: &S) -> Self {
        self.map(|c| c.clone() * k.clone())
    }

    /// Coordinatewise product (the f-algebra multiplication of ℝ^m).
    pub fn hadamard(&self, other: &Self) -> Self {
        self.zip_with(other, |a, b| a.clone() * b.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn is_nonneg(&self) -> bool {
        self.coords.iter().all(|c| !c.is_negative())
    }

    pub fn leq(&self, other: &Self) -> bool {
        self.dim() == other.dim() && self.coords.iter().zip(&other.coords).all(|(a, b)| a <= b)
    }

    /// Supremum norm.
    pub fn sup_norm(&self) -> S {
        self.coords
            .iter()
            .fold(S::zero(), |acc, c| S::max_of(&acc, &c.abs()))
    }

    /// Sum of coordinates.
    pub fn total(&self) -> S {
        self.coords.iter().fold(S::zero(), |acc, c| acc + c.clone())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "dim": self.dim(),
            "coords": self.coords.iter().map(Scalar::to_json).collect::<Vec<_>>(),
            "exact": S::EXACT,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        // a bare array is shorthand for {"coords": [...]}
        let coords = v
            .as_array()
            .or_else(|| v.get("coords").and_then(Value::as_array))
            .ok_or_else(|| Error::Format("tuple needs a \"coords\" array".into()))?;
        let coords = coords.iter().map(S::from_json).collect::<Result<Vec<_>>>()?;
        if let Some(dim) = v.get("dim") {
            if dim.as_u64() != Some(coords.len() as u64) {
                return Err(Error::Format(format!(
                    "\"dim\" {dim} disagrees with {} coordinates",
                    coords.len()
                )));
            }
        }
        Ok(CoordTuple::new(coords))
    }
}

impl ExactTuple {
    pub fn to_real(&self) -> RealTuple {
        CoordTuple::new(self.coords.iter().map(Scalar::to_f64).collect())
    }
}

impl RealTuple {
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.dim() == other.dim()
            && self
                .coords
                .iter()
                .zip(&other.coords)
                .all(|(a, b)| crate::scalar::approx_eq(*a, *b, tol))
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

/// Fails unless every tuple has the dimension of the first.
pub fn common_dim<S: Scalar>(fs: &[CoordTuple<S>]) -> Result<usize> {
    let dim = fs
        .first()
        .map(CoordTuple::dim)
        .ok_or_else(|| Error::Argument("empty tuple sequence".into()))?;
    if let Some(bad) = fs.iter().find(|f| f.dim() != dim) {
        return Err(Error::Argument(format!(
            "dimension mismatch: {} vs {dim}",
            bad.dim()
        )));
    }
    Ok(dim)
}

impl<S: Scalar> Add for &CoordTuple<S> {
    type Output = CoordTuple<S>;
    fn add(self, rhs: Self) -> CoordTuple<S> {
        self.zip_with(rhs, |a, b| a.clone() + b.clone())
    }
}

impl<S: Scalar> Sub for &CoordTuple<S> {
    type Output = CoordTuple<S>;
    fn sub(self, rhs: Self) -> CoordTuple<S> {
        self.zip_with(rhs, |a, b| a.clone() - b.clone())
    }
}

impl<S: Scalar> Neg for &CoordTuple<S> {
    type Output = CoordTuple<S>;
    fn neg(self) -> CoordTuple<S> {
        self.map(|c| -c.clone())
    }
}

impl<S: Scalar> Mul<&S> for &CoordTuple<S> {
    type Output = CoordTuple<S>;
    fn mul(self, k: &S) -> CoordTuple<S> {
        self.scale(k)
    }
}

impl<S: Scalar> fmt::Display for CoordTuple<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
