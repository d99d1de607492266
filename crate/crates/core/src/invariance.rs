//! Carrier-agnostic checks for total-orderization invariance (TOI) and
//! symmetry of maps `L^n → V`, and verifiers for the two equivalences that
//! hold for TOI maps on lattices with a bottom element.

use std::fmt::Debug;
use std::sync::Arc;

use itertools::Itertools;

use crate::certificate::{certify, first_failure, Certificate, Witness};
use crate::error::{Error, Result};
use crate::lattice::{Lattice, Strategy};
use crate::orderization::total_orderization;
use crate::rng::case_rng;

/// Exhaustive checks refuse to go beyond this many tuples.
pub const EXHAUSTIVE_BUDGET: usize = 1_000_000;

type Evaluator<E, V> = Arc<dyn Fn(&[E]) -> Result<V> + Send + Sync>;
type Comparator<V> = Arc<dyn Fn(&V, &V) -> bool + Send + Sync>;

/// A deterministic map `L^n → V` together with the equality used on `V`.
pub struct MapUnderTest<L: Lattice, V> {
    domain: Arc<L>,
    arity: usize,
    name: String,
    eval: Evaluator<L::Elem, V>,
    same: Comparator<V>,
}

impl<L: Lattice, V> Clone for MapUnderTest<L, V> {
    fn clone(&self) -> Self {
        MapUnderTest {
            domain: Arc::clone(&self.domain),
            arity: self.arity,
            name: self.name.clone(),
            eval: Arc::clone(&self.eval),
            same: Arc::clone(&self.same),
        }
    }
}

impl<L: Lattice, V> Debug for MapUnderTest<L, V> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("MapUnderTest")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("domain", &self.domain.describe())
            .finish()
    }
}

impl<L, V> MapUnderTest<L, V>
where
    L: Lattice + 'static,
    V: Clone + Debug + PartialEq + Send + Sync + 'static,
{
    /// Values are compared by exact equality.
    pub fn new(
        domain: Arc<L>,
        arity: usize,
        name: impl Into<String>,
        eval: impl Fn(&[L::Elem]) -> Result<V> + Send + Sync + 'static,
    ) -> Self {
        MapUnderTest {
            domain,
            arity,
            name: name.into(),
            eval: Arc::new(eval),
            same: Arc::new(|a: &V, b: &V| a == b),
        }
    }

    /// Replaces exact equality, e.g. by a tolerance comparison for floats.
    pub fn with_comparator(mut self, same: impl Fn(&V, &V) -> bool + Send + Sync + 'static) -> Self {
        self.same = Arc::new(same);
        self
    }

    pub fn domain(&self) -> &L {
        &self.domain
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, xs: &[L::Elem]) -> Result<V> {
        if xs.len() != self.arity {
            return Err(Error::Argument(format!(
                "{} takes {} arguments, got {}",
                self.name,
                self.arity,
                xs.len()
            )));
        }
        (self.eval)(xs)
    }

    pub fn same(&self, a: &V, b: &V) -> bool {
        (self.same)(a, b)
    }
}

/// The tuples a strategy visits, addressable by index so checks can run in
/// parallel and still report the first failure deterministically.
struct TupleSource<E> {
    arity: usize,
    elements: Option<Vec<E>>,
    seed: u64,
    count: usize,
}

impl<E: Clone> TupleSource<E> {
    fn new<L: Lattice<Elem = E> + ?Sized>(l: &L, arity: usize, strategy: Strategy) -> Result<Self> {
        match strategy {
            Strategy::Exhaustive => {
                let elements = l.elements().ok_or_else(|| {
                    Error::Unsupported(format!(
                        "exhaustive check needs a finite domain, got {}",
                        l.describe()
                    ))
                })?;
                let count = exhaustive_count(elements.len(), arity)?;
                Ok(TupleSource {
                    arity,
                    elements: Some(elements),
                    seed: 0,
                    count,
                })
            }
            Strategy::Sampled { count, seed } => Ok(TupleSource {
                arity,
                elements: None,
                seed,
                count,
            }),
        }
    }

    fn seed(&self) -> Option<u64> {
        self.elements.is_none().then_some(self.seed)
    }

    fn tuple<L: Lattice<Elem = E> + ?Sized>(&self, l: &L, index: usize) -> Vec<E> {
        match &self.elements {
            Some(elems) => {
                let mut code = index;
                (0..self.arity)
                    .map(|_| {
                        let e = elems[code % elems.len()].clone();
                        code /= elems.len();
                        e
                    })
                    .collect()
            }
            None => {
                let mut rng = case_rng(self.seed, index as u64);
                (0..self.arity).map(|_| l.sample(&mut rng)).collect()
            }
        }
    }
}

fn exhaustive_count(size: usize, arity: usize) -> Result<usize> {
    size.checked_pow(arity as u32)
        .filter(|&c| c <= EXHAUSTIVE_BUDGET)
        .ok_or_else(|| {
            Error::Unsupported(format!(
                "{size}^{arity} tuples exceed the exhaustive budget of {EXHAUSTIVE_BUDGET}"
            ))
        })
}

pub type MapCertificate<L, V> = Certificate<<L as Lattice>::Elem, V>;

/// Checks `T(xs) = T(to(xs))` over the strategy's tuples.
pub fn is_toi<L, V>(map: &MapUnderTest<L, V>, strategy: Strategy) -> Result<MapCertificate<L, V>>
where
    L: Lattice + 'static,
    V: Clone + Debug + PartialEq + Send + Sync + 'static,
{
    let l = map.domain();
    let source = TupleSource::new(l, map.arity(), strategy)?;
    let found = first_failure(source.count, |i| {
        let xs = source.tuple(l, i);
        let to = total_orderization(l, &xs)?.into_vec();
        let lhs = map.eval(&xs)?;
        let rhs = map.eval(&to)?;
        Ok((!map.same(&lhs, &rhs)).then(|| Witness {
            input: xs,
            counterpart: to,
            lhs,
            rhs,
        }))
    })?;
    Ok(certify(source.count, source.seed(), found))
}

/// All permutations for arity up to 4, all transpositions beyond.
fn permutation_set(n: usize) -> Vec<Vec<usize>> {
    if n <= 4 {
        (0..n).permutations(n).filter(|p| p.iter().enumerate().any(|(i, &j)| i != j)).collect()
    } else {
        (0..n)
            .tuple_combinations()
            .map(|(i, j)| {
                let mut p: Vec<usize> = (0..n).collect();
                p.swap(i, j);
                p
            })
            .collect()
    }
}

/// Checks `T(xs) = T(σ·xs)` for the permutation set of the arity.
pub fn is_symmetric_map<L, V>(
    map: &MapUnderTest<L, V>,
    strategy: Strategy,
) -> Result<MapCertificate<L, V>>
where
    L: Lattice + 'static,
    V: Clone + Debug + PartialEq + Send + Sync + 'static,
{
    let l = map.domain();
    let source = TupleSource::new(l, map.arity(), strategy)?;
    let perms = permutation_set(map.arity());
    let found = first_failure(source.count, |i| {
        let xs = source.tuple(l, i);
        let lhs = map.eval(&xs)?;
        for p in &perms {
            let permuted: Vec<L::Elem> = p.iter().map(|&j| xs[j].clone()).collect();
            let rhs = map.eval(&permuted)?;
            if !map.same(&lhs, &rhs) {
                return Ok(Some(Witness {
                    input: xs,
                    counterpart: permuted,
                    lhs,
                    rhs,
                }));
            }
        }
        Ok(None)
    })?;
    Ok(certify(source.count, source.seed(), found))
}

/// `xs ↦ g(to(xs))`, which is TOI because `to` fixes its own output.
pub fn make_toi_map<L, V>(
    domain: Arc<L>,
    arity: usize,
    name: impl Into<String>,
    g: impl Fn(&[L::Elem]) -> Result<V> + Send + Sync + 'static,
) -> MapUnderTest<L, V>
where
    L: Lattice + 'static,
    V: Clone + Debug + PartialEq + Send + Sync + 'static,
{
    let l = Arc::clone(&domain);
    MapUnderTest::new(domain, arity, name, move |xs: &[L::Elem]| {
        let to = total_orderization(l.as_ref(), xs)?.into_vec();
        g(&to)
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TheoremStatus {
    /// The map is TOI and the two conditions agree.
    Equivalent,
    /// The map is TOI but exactly one condition holds.
    Counterexample,
    /// The map is not TOI, so the theorem says nothing.
    PreconditionFailed,
}

impl TheoremStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            TheoremStatus::Equivalent => "equivalent",
            TheoremStatus::Counterexample => "counterexample",
            TheoremStatus::PreconditionFailed => "precondition-failed",
        }
    }
}

/// Outcome of a two-condition equivalence check. The witnesses are the
/// first tuples (in enumeration order) violating each condition.
#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport<E> {
    pub status: TheoremStatus,
    pub condition_i: Option<bool>,
    pub condition_ii: Option<bool>,
    pub witness_i: Option<Vec<E>>,
    pub witness_ii: Option<Vec<E>>,
    pub checked: usize,
}

impl<E> TheoremReport<E> {
    fn precondition_failed(checked: usize) -> Self {
        TheoremReport {
            status: TheoremStatus::PreconditionFailed,
            condition_i: None,
            condition_ii: None,
            witness_i: None,
            witness_ii: None,
            checked,
        }
    }

    fn from_conditions(i: Option<Vec<E>>, ii: Option<Vec<E>>, checked: usize) -> Self {
        let (ci, cii) = (i.is_none(), ii.is_none());
        TheoremReport {
            status: if ci == cii {
                TheoremStatus::Equivalent
            } else {
                TheoremStatus::Counterexample
            },
            condition_i: Some(ci),
            condition_ii: Some(cii),
            witness_i: i,
            witness_ii: ii,
            checked,
        }
    }
}

fn bottom_of<L: Lattice + ?Sized>(l: &L) -> Result<L::Elem> {
    l.bottom().ok_or_else(|| {
        Error::Argument(format!("{} has no bottom element", l.describe()))
    })
}

/// First tuple of the exhaustive enumeration that satisfies `applies` but
/// fails `holds`.
fn first_violation<L, V>(
    map: &MapUnderTest<L, V>,
    source: &TupleSource<L::Elem>,
    applies: impl Fn(&[L::Elem]) -> bool + Sync,
    holds: impl Fn(&[L::Elem]) -> Result<bool> + Sync,
) -> Result<Option<Vec<L::Elem>>>
where
    L: Lattice + 'static,
    V: Clone + Debug + PartialEq + Send + Sync + 'static,
{
    let found = first_failure(source.count, |i| {
        let xs = source.tuple(map.domain(), i);
        if !applies(&xs) || holds(&xs)? {
            return Ok(None);
        }
        Ok(Some(xs))
    })?;
    Ok(found.map(|(_, xs)| xs))
}

/// Compares, for a TOI map with bottom `θ`,
/// (i) `T(xs) = a` whenever `x_i ∧ x_j = θ` for some `i, j` (possibly equal), and
/// (ii) `T(θ, x_2, ..., x_n) = a` for all `x_2, ..., x_n`.
pub fn check_genorthosym<L, V>(map: &MapUnderTest<L, V>, a: &V) -> Result<TheoremReport<L::Elem>>
where
    L: Lattice + 'static,
    V: Clone + Debug + PartialEq + Send + Sync + 'static,
{
    let l = map.domain();
    let theta = bottom_of(l)?;
    let toi = is_toi(map, Strategy::Exhaustive)?;
    if !toi.passed {
        return Ok(TheoremReport::precondition_failed(toi.trials));
    }
    let n = map.arity();
    let source = TupleSource::new(l, n, Strategy::Exhaustive)?;
    let value_is_a = |xs: &[L::Elem]| Ok(map.same(&map.eval(xs)?, a));
    let cond_i = first_violation(
        map,
        &source,
        |xs| (0..n).any(|i| (i..n).any(|j| l.meet(&xs[i], &xs[j]) == theta)),
        value_is_a,
    )?;
    let cond_ii = first_violation(map, &source, |xs| xs[0] == theta, value_is_a)?;
    Ok(TheoremReport::from_conditions(cond_i, cond_ii, 2 * source.count))
}

/// Compares, for a TOI map with bottom `θ`,
/// (i) `T(xs) = φ(⋁ xs)` whenever the `x_k` are pairwise disjoint, and
/// (ii) `T(θ, ..., θ, x) = φ(x)` for all `x`.
pub fn check_genorthsteady<L, V>(
    map: &MapUnderTest<L, V>,
    phi: impl Fn(&L::Elem) -> Result<V> + Sync,
) -> Result<TheoremReport<L::Elem>>
where
    L: Lattice + 'static,
    V: Clone + Debug + PartialEq + Send + Sync + 'static,
{
    let l = map.domain();
    let theta = bottom_of(l)?;
    let toi = is_toi(map, Strategy::Exhaustive)?;
    if !toi.passed {
        return Ok(TheoremReport::precondition_failed(toi.trials));
    }
    let n = map.arity();
    let source = TupleSource::new(l, n, Strategy::Exhaustive)?;
    let matches_phi = |xs: &[L::Elem]| {
        let sup = xs[1..].iter().fold(xs[0].clone(), |acc, x| l.join(&acc, x));
        Ok(map.same(&map.eval(xs)?, &phi(&sup)?))
    };
    let cond_i = first_violation(
        map,
        &source,
        |xs| (0..n).tuple_combinations().all(|(i, j)| l.meet(&xs[i], &xs[j]) == theta),
        matches_phi,
    )?;
    let cond_ii = first_violation(map, &source, |xs| xs[..n - 1].iter().all(|x| *x == theta), matches_phi)?;
    Ok(TheoremReport::from_conditions(cond_i, cond_ii, 2 * source.count))
}
