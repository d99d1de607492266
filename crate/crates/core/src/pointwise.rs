//! Lattice carriers over coordinate tuples: the whole space ℝ^m, its
//! positive cone, and finite product grids `V^m`.

use std::sync::atomic::{AtomicU64, Ordering};

use rand::Rng;

use crate::lattice::Lattice;
use crate::rng::CaseRng;
use crate::scalar::Scalar;
use crate::tuple::CoordTuple;

/// How random coordinates are drawn.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Sampling {
    /// Integers in the closed range.
    Integers(i64, i64),
    /// Uniform floats in `[lo, hi)`.
    Uniform(f64, f64),
}

impl Sampling {
    pub fn draw<S: Scalar>(&self, rng: &mut CaseRng) -> S {
        match *self {
            Sampling::Integers(lo, hi) => S::from_int(rng.gen_range(lo..=hi)),
            Sampling::Uniform(lo, hi) => {
                S::from_f64(rng.gen_range(lo..hi)).expect("finite float converts")
            }
        }
    }

    fn nonneg(self) -> Self {
        match self {
            Sampling::Integers(lo, hi) => Sampling::Integers(lo.max(0), hi.max(0)),
            Sampling::Uniform(lo, hi) => Sampling::Uniform(lo.max(0.0), hi.max(f64::MIN_POSITIVE)),
        }
    }
}

/// ℝ^m (or its positive cone) under pointwise min/max.
///
/// The dual `M_k` form is spot-checked on every eighth evaluation; the
/// pointwise order is a product of chains, so the check never fires on
/// valid input.
#[derive(Debug)]
pub struct Pointwise<S> {
    dim: usize,
    cone: bool,
    sampling: Sampling,
    calls: AtomicU64,
    _scalar: std::marker::PhantomData<S>,
}

impl<S> Clone for Pointwise<S> {
    fn clone(&self) -> Self {
        Pointwise {
            dim: self.dim,
            cone: self.cone,
            sampling: self.sampling,
            calls: AtomicU64::new(0),
            _scalar: std::marker::PhantomData,
        }
    }
}

impl<S: Scalar> Pointwise<S> {
    pub fn new(dim: usize) -> Self {
        Pointwise {
            dim,
            cone: false,
            sampling: Sampling::Integers(-5, 5),
            calls: AtomicU64::new(0),
            _scalar: std::marker::PhantomData,
        }
    }

    /// The positive cone E⁺, with bottom element 0.
    pub fn positive_cone(dim: usize) -> Self {
        Pointwise {
            cone: true,
            sampling: Sampling::Integers(0, 5),
            ..Self::new(dim)
        }
    }

    pub fn with_sampling(mut self, sampling: Sampling) -> Self {
        self.sampling = if self.cone { sampling.nonneg() } else { sampling };
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_cone(&self) -> bool {
        self.cone
    }
}

impl<S: Scalar> Lattice for Pointwise<S> {
    type Elem = CoordTuple<S>;

    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.meet(b)
    }

    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.join(b)
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        a.dim() == self.dim && (!self.cone || a.is_nonneg())
    }

    fn bottom(&self) -> Option<Self::Elem> {
        self.cone.then(|| CoordTuple::zeros(self.dim))
    }

    fn sample(&self, rng: &mut CaseRng) -> Self::Elem {
        CoordTuple::new((0..self.dim).map(|_| self.sampling.draw(rng)).collect())
    }

    fn spot_check_dual(&self) -> bool {
        self.calls.fetch_add(1, Ordering::Relaxed).is_multiple_of(8)
    }

    fn describe(&self) -> String {
        if self.cone {
            format!("positive cone of R^{}", self.dim)
        } else {
            format!("R^{}", self.dim)
        }
    }
}

/// The finite sublattice `V^m` of ℝ^m for a finite value set `V`.
#[derive(Debug, Clone)]
pub struct Grid<S> {
    dim: usize,
    values: Vec<S>,
}

impl<S: Scalar> Grid<S> {
    pub fn new(dim: usize, mut values: Vec<S>) -> Self {
        values.sort_by(|a, b| a.partial_cmp(b).expect("comparable grid values"));
        values.dedup();
        assert!(!values.is_empty(), "grid needs at least one value");
        Grid { dim, values }
    }

    pub fn size(&self) -> usize {
        self.values.len().pow(self.dim as u32)
    }

    pub fn values(&self) -> &[S] {
        &self.values
    }
}

impl<S: Scalar> Lattice for Grid<S> {
    type Elem = CoordTuple<S>;

    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.meet(b)
    }

    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        a.join(b)
    }

    fn contains(&self, a: &Self::Elem) -> bool {
        a.dim() == self.dim && a.coords().iter().all(|c| self.values.contains(c))
    }

    fn bottom(&self) -> Option<Self::Elem> {
        Some(CoordTuple::new(vec![self.values[0].clone(); self.dim]))
    }

    fn top(&self) -> Option<Self::Elem> {
        Some(CoordTuple::new(vec![self.values.last().unwrap().clone(); self.dim]))
    }

    fn elements(&self) -> Option<Vec<Self::Elem>> {
        let k = self.values.len();
        let out = (0..self.size())
            .map(|mut code| {
                let mut coords = Vec::with_capacity(self.dim);
                for _ in 0..self.dim {
                    coords.push(self.values[code % k].clone());
                    code /= k;
                }
                CoordTuple::new(coords)
            })
            .collect();
        Some(out)
    }

    fn sample(&self, rng: &mut CaseRng) -> Self::Elem {
        CoordTuple::new(
            (0..self.dim)
                .map(|_| self.values[rng.gen_range(0..self.values.len())].clone())
                .collect(),
        )
    }

    fn describe(&self) -> String {
        format!("grid of {} values in dimension {}", self.values.len(), self.dim)
    }
}
