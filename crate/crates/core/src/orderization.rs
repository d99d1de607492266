//! The median, the generalized order statistics `M_k`, and total
//! orderization.
//!
//! `M_k(x_1,...,x_n)` is the join, over all `(n+1-k)`-element index
//! subsets, of the meet of the chosen elements. In a distributive lattice
//! this equals the meet, over all k-element subsets, of their joins; both
//! forms are evaluated and a mismatch is reported as a distributivity
//! violation.
//! On a chain `M_k` returns the k-th smallest element.

use std::cmp::Ordering;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::lattice::{ensure_member, Lattice};
use crate::scalar::Scalar;
use crate::tuple::{common_dim, CoordTuple};

/// Largest tuple length accepted by the combinatorial `M_k`.
pub const COMBINATORIAL_CAP: usize = 12;

fn fold_meet<L: Lattice + ?Sized>(l: &L, xs: &[&L::Elem]) -> L::Elem {
    let mut acc = xs[0].clone();
    for x in &xs[1..] {
        acc = l.meet(&acc, x);
    }
    acc
}

fn fold_join<L: Lattice + ?Sized>(l: &L, xs: &[&L::Elem]) -> L::Elem {
    let mut acc = xs[0].clone();
    for x in &xs[1..] {
        acc = l.join(&acc, x);
    }
    acc
}

/// Ternary median `(x∧y)∨(x∧z)∨(y∧z)`, checked against `(x∨y)∧(x∨z)∧(y∨z)`.
pub fn median3<L: Lattice + ?Sized>(
    l: &L,
    x: &L::Elem,
    y: &L::Elem,
    z: &L::Elem,
) -> Result<L::Elem> {
    for e in [x, y, z] {
        ensure_member(l, e)?;
    }
    l.ensure_distributive()?;
    let primal = l.join(&l.join(&l.meet(x, y), &l.meet(x, z)), &l.meet(y, z));
    let dual = l.meet(&l.meet(&l.join(x, y), &l.join(x, z)), &l.join(y, z));
    if primal != dual {
        return Err(Error::DistributivityViolation(format!("{x:?}, {y:?}, {z:?}")));
    }
    Ok(primal)
}

fn check_k(n: usize, k: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Argument("M_k needs at least one argument".into()));
    }
    if k == 0 || k > n {
        return Err(Error::Argument(format!("k = {k} outside [1, {n}]")));
    }
    if n > COMBINATORIAL_CAP {
        return Err(Error::Unsupported(format!(
            "combinatorial M_k is capped at n = {COMBINATORIAL_CAP}, got {n}; use the pointwise path"
        )));
    }
    Ok(())
}

/// Join-of-meets over `(n+1-k)`-subsets; no validation.
fn mk_primal<L: Lattice + ?Sized>(l: &L, xs: &[L::Elem], k: usize) -> L::Elem {
    let size = xs.len() + 1 - k;
    let mut acc: Option<L::Elem> = None;
    for subset in xs.iter().combinations(size) {
        let m = fold_meet(l, &subset);
        acc = Some(match acc {
            None => m,
            Some(a) => l.join(&a, &m),
        });
    }
    acc.expect("at least one subset")
}

/// Meet-of-joins over `k`-subsets; no validation.
fn mk_dual<L: Lattice + ?Sized>(l: &L, xs: &[L::Elem], k: usize) -> L::Elem {
    let size = k;
    let mut acc: Option<L::Elem> = None;
    for subset in xs.iter().combinations(size) {
        let j = fold_join(l, &subset);
        acc = Some(match acc {
            None => j,
            Some(a) => l.meet(&a, &j),
        });
    }
    acc.expect("at least one subset")
}

fn mk_checked<L: Lattice + ?Sized>(l: &L, xs: &[L::Elem], k: usize) -> Result<L::Elem> {
    let primal = mk_primal(l, xs, k);
    if l.spot_check_dual() {
        let dual = mk_dual(l, xs, k);
        if primal != dual {
            return Err(Error::DistributivityViolation(format!(
                "M_{k} primal {primal:?} != dual {dual:?} on {xs:?}"
            )));
        }
    }
    Ok(primal)
}

/// The generalized order statistic `M_k(xs)`, `1 <= k <= n <= 12`.
pub fn m_k<L: Lattice + ?Sized>(l: &L, xs: &[L::Elem], k: usize) -> Result<L::Elem> {
    check_k(xs.len(), k)?;
    for x in xs {
        ensure_member(l, x)?;
    }
    l.ensure_distributive()?;
    mk_checked(l, xs, k)
}

/// The chain `(M_1(xs), ..., M_n(xs))` together with its source tuple.
#[derive(Debug, Clone, PartialEq)]
pub struct TotalOrderization<E> {
    chain: Vec<E>,
    source: Vec<E>,
}

impl<E: Clone> TotalOrderization<E> {
    pub fn as_slice(&self) -> &[E] {
        &self.chain
    }

    pub fn into_vec(self) -> Vec<E> {
        self.chain
    }

    pub fn source(&self) -> &[E] {
        &self.source
    }

    pub fn len(&self) -> usize {
        self.chain.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chain.is_empty()
    }

    pub fn get(&self, k: usize) -> &E {
        &self.chain[k - 1]
    }
}

pub fn total_orderization<L: Lattice + ?Sized>(
    l: &L,
    xs: &[L::Elem],
) -> Result<TotalOrderization<L::Elem>> {
    let n = xs.len();
    check_k(n, 1)?;
    for x in xs {
        ensure_member(l, x)?;
    }
    l.ensure_distributive()?;
    let chain = (1..=n).map(|k| mk_checked(l, xs, k)).collect::<Result<Vec<_>>>()?;
    Ok(TotalOrderization {
        chain,
        source: xs.to_vec(),
    })
}

fn scalar_cmp<S: Scalar>(a: &S, b: &S) -> Ordering {
    a.partial_cmp(b).expect("coordinates must be comparable (no NaN)")
}

/// `M_k` on coordinate tuples by per-coordinate selection of the k-th
/// smallest value. Works for any `n`.
pub fn m_k_pointwise<S: Scalar>(fs: &[CoordTuple<S>], k: usize) -> Result<CoordTuple<S>> {
    let dim = common_dim(fs)?;
    let n = fs.len();
    if k == 0 || k > n {
        return Err(Error::Argument(format!("k = {k} outside [1, {n}]")));
    }
    let mut fiber: Vec<S> = Vec::with_capacity(n);
    let coords = (0..dim)
        .map(|c| {
            fiber.clear();
            fiber.extend(fs.iter().map(|f| f.get(c).clone()));
            let (_, kth, _) = fiber.select_nth_unstable_by(k - 1, scalar_cmp);
            kth.clone()
        })
        .collect();
    Ok(CoordTuple::new(coords))
}

/// Total orderization of coordinate tuples by sorting each fiber.
pub fn total_orderization_pointwise<S: Scalar>(
    fs: &[CoordTuple<S>],
) -> Result<Vec<CoordTuple<S>>> {
    let dim = common_dim(fs)?;
    let n = fs.len();
    let mut out = vec![Vec::with_capacity(dim); n];
    let mut fiber: Vec<S> = Vec::with_capacity(n);
    for c in 0..dim {
        fiber.clear();
        fiber.extend(fs.iter().map(|f| f.get(c).clone()));
        fiber.sort_by(scalar_cmp);
        for (k, v) in fiber.iter().enumerate() {
            out[k].push(v.clone());
        }
    }
    Ok(out.into_iter().map(CoordTuple::new).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{is_chain, leq, Chain, ElemId, FiniteLattice};
    use crate::pointwise::Pointwise;
    use crate::scalar::Q;
    use crate::tuple::ExactTuple;
    use proptest::prelude::*;

    fn q(i: i64) -> Q {
        Q::from(i)
    }

    fn t(c: &[i64]) -> ExactTuple {
        ExactTuple::from_ints(c)
    }

    /// Oracle: k-th smallest per coordinate via a full sort.
    fn sorted_fiber_oracle(fs: &[Vec<i64>], k: usize) -> Vec<i64> {
        (0..fs[0].len())
            .map(|c| {
                let mut v: Vec<i64> = fs.iter().map(|f| f[c]).collect();
                v.sort();
                v[k - 1]
            })
            .collect()
    }

    #[test]
    fn median_of_reals() {
        let r = Chain::<Q>::unbounded();
        assert_eq!(median3(&r, &q(1), &q(2), &q(3)).unwrap(), q(2));
        assert_eq!(median3(&r, &q(2), &q(2), &q(5)).unwrap(), q(2));
        assert_eq!(median3(&r, &q(3), &q(1), &q(2)).unwrap(), q(2));
    }

    #[test]
    fn median_of_tuples() {
        let e = Pointwise::<Q>::new(2);
        let m = median3(&e, &t(&[1, 5]), &t(&[2, 4]), &t(&[3, 3])).unwrap();
        assert_eq!(m, t(&[2, 4]));
    }

    #[test]
    fn median_refuses_non_distributive_carrier() {
        let m3 = FiniteLattice::diamond_m3();
        let r = median3(&m3, &ElemId(1), &ElemId(2), &ElemId(3));
        assert!(matches!(r, Err(Error::DistributivityViolation(_))));
    }

    #[test]
    fn dual_mismatch_is_a_distributivity_violation() {
        // the raw primal/dual forms really do differ on M3 atoms
        let m3 = FiniteLattice::diamond_m3();
        let atoms = [ElemId(1), ElemId(2), ElemId(3)];
        assert_ne!(mk_primal(&m3, &atoms, 2), mk_dual(&m3, &atoms, 2));
        assert!(matches!(
            mk_checked(&m3, &atoms, 2),
            Err(Error::DistributivityViolation(_))
        ));
        assert!(total_orderization(&m3, &atoms).is_err());
    }

    #[test]
    fn m_k_on_a_chain_picks_the_kth_element() {
        let c = Chain::finite(vec![q(1), q(2), q(3), q(4)]);
        assert_eq!(m_k(&c, &[q(1), q(2), q(3)], 2).unwrap(), q(2));
        assert_eq!(m_k(&c, &[q(3), q(1), q(2)], 3).unwrap(), q(3));
    }

    #[test]
    fn n_equals_two_is_meet_and_join() {
        let e = Pointwise::<Q>::new(2);
        let (x, y) = (t(&[1, 4]), t(&[3, 2]));
        assert_eq!(m_k(&e, &[x.clone(), y.clone()], 1).unwrap(), x.meet(&y));
        assert_eq!(m_k(&e, &[x.clone(), y.clone()], 2).unwrap(), x.join(&y));
    }

    #[test]
    fn m_k_pointwise_second_smallest() {
        let e = Pointwise::<Q>::new(3);
        let fs = [t(&[3, 1, 2]), t(&[1, 3, 2]), t(&[2, 2, 2])];
        let oracle = sorted_fiber_oracle(&[vec![3, 1, 2], vec![1, 3, 2], vec![2, 2, 2]], 2);
        assert_eq!(oracle, vec![2, 2, 2]);
        assert_eq!(m_k(&e, &fs, 2).unwrap(), t(&oracle));
        assert_eq!(m_k_pointwise(&fs, 2).unwrap(), t(&oracle));
        assert_eq!(m_k_pointwise(&fs, 1).unwrap(), t(&[1, 1, 2]));
        assert_eq!(m_k_pointwise(&fs, 3).unwrap(), t(&[3, 3, 2]));
        assert_eq!(m_k_pointwise(&fs[..1], 1).unwrap(), fs[0]);
    }

    #[test]
    fn argument_errors() {
        let e = Pointwise::<Q>::new(1);
        assert!(matches!(m_k(&e, &[t(&[1])], 0), Err(Error::Argument(_))));
        assert!(matches!(m_k(&e, &[t(&[1])], 2), Err(Error::Argument(_))));
        assert!(matches!(m_k(&e, &[], 1), Err(Error::Argument(_))));
        let many: Vec<_> = (0..13).map(|i| t(&[i])).collect();
        assert!(matches!(m_k(&e, &many, 3), Err(Error::Unsupported(_))));
        assert_eq!(m_k_pointwise(&many, 3).unwrap(), t(&[2]));
        assert!(m_k_pointwise(&[t(&[1]), t(&[1, 2])], 1).is_err());
        assert!(m_k(&e, &[t(&[1, 2])], 1).is_err());
    }

    #[test]
    fn total_orderization_examples() {
        let e = Pointwise::<Q>::new(2);
        let to = total_orderization(&e, &[t(&[1, 0]), t(&[0, 1])]).unwrap();
        assert_eq!(to.as_slice(), &[t(&[0, 0]), t(&[1, 1])]);
        let chain = [t(&[2, 2]), t(&[3, 3])];
        assert_eq!(total_orderization(&e, &chain).unwrap().as_slice(), &chain);
        let to = total_orderization(&e, &[t(&[3, 1]), t(&[1, 3]), t(&[2, 2])]).unwrap();
        assert_eq!(to.as_slice(), &[t(&[1, 1]), t(&[2, 2]), t(&[3, 3])]);
        assert_eq!(to.source().len(), 3);
    }

    fn arb_fs() -> impl Strategy<Value = Vec<Vec<i64>>> {
        (1usize..=8, 1usize..=10).prop_flat_map(|(n, m)| {
            proptest::collection::vec(proptest::collection::vec(-5i64..=5, m), n)
        })
    }

    proptest! {
        #[test]
        fn fast_path_agrees_with_combinatorial(raw in arb_fs(), kseed in 0usize..64) {
            let n = raw.len();
            let k = kseed % n + 1;
            let fs: Vec<ExactTuple> = raw.iter().map(|c| t(c)).collect();
            let e = Pointwise::<Q>::new(fs[0].dim());
            let slow = m_k(&e, &fs, k).unwrap();
            prop_assert_eq!(&slow, &m_k_pointwise(&fs, k).unwrap());
            prop_assert_eq!(slow, t(&sorted_fiber_oracle(&raw, k)));
        }

        #[test]
        fn orderization_is_a_sorted_chain_and_idempotent(raw in arb_fs()) {
            let fs: Vec<ExactTuple> = raw.iter().map(|c| t(c)).collect();
            let e = Pointwise::<Q>::new(fs[0].dim());
            let to = total_orderization(&e, &fs).unwrap();
            prop_assert_eq!(to.len(), fs.len());
            prop_assert!(is_chain(&e, to.as_slice()).unwrap());
            for w in to.as_slice().windows(2) {
                prop_assert!(leq(&e, &w[0], &w[1]).unwrap());
            }
            let again = total_orderization(&e, to.as_slice()).unwrap();
            prop_assert_eq!(again.as_slice(), to.as_slice());
            prop_assert_eq!(total_orderization_pointwise(&fs).unwrap(), to.into_vec());
        }
    }
}
