//! Independent oracles for the combinatorial counts and the coordinate
//! order statistics.

use itertools::Itertools;
use latticemed::finite::{
    corpus, enumerate_posets, free_dl_count, nonconstant_monotone_functions, FinitePoset,
};
use latticemed::rng::case_rng;
use latticemed::{m_k_pointwise, total_orderization, ExactTuple, Lattice, Q};
use rand::Rng;

/// Relation matrices as bitmasks: bit `i * p + j` means `i <= j`.
fn is_partial_order(rel: u64, p: usize) -> bool {
    let r = |i: usize, j: usize| rel >> (i * p + j) & 1 == 1;
    (0..p).all(|i| r(i, i))
        && (0..p).all(|i| (0..p).all(|j| i == j || !(r(i, j) && r(j, i))))
        && (0..p).all(|i| (0..p).all(|j| !r(i, j) || (0..p).all(|k| !r(j, k) || r(i, k))))
}

/// Smallest relabelled relation code over all permutations.
fn brute_canonical(rel: u64, p: usize) -> u64 {
    (0..p)
        .permutations(p)
        .map(|perm| {
            let mut code = 0u64;
            for i in 0..p {
                for j in 0..p {
                    if rel >> (i * p + j) & 1 == 1 {
                        code |= 1 << (perm[i] * p + perm[j]);
                    }
                }
            }
            code
        })
        .min()
        .unwrap_or(0)
}

/// Unlabeled posets on `p` points by filtering every relation that
/// contains the diagonal.
fn count_posets_naively(p: usize) -> usize {
    let diagonal: u64 = (0..p).map(|i| 1u64 << (i * p + i)).sum();
    let off: Vec<usize> = (0..p * p).filter(|b| diagonal >> b & 1 == 0).collect();
    let mut classes = std::collections::HashSet::new();
    for mask in 0u64..1 << off.len() {
        let rel = off
            .iter()
            .enumerate()
            .filter(|(k, _)| mask >> k & 1 == 1)
            .fold(diagonal, |acc, (_, &b)| acc | 1 << b);
        if is_partial_order(rel, p) {
            classes.insert(brute_canonical(rel, p));
        }
    }
    classes.len()
}

#[test]
fn poset_counts_match_naive_enumeration() {
    for p in 0..=4 {
        assert_eq!(enumerate_posets(p).unwrap().len(), count_posets_naively(p), "p = {p}");
    }
}

#[test]
fn poset_counts_up_to_six() {
    let counts: Vec<usize> = (0..=6).map(|p| enumerate_posets(p).unwrap().len()).collect();
    assert_eq!(counts, [1, 1, 2, 5, 16, 63, 318]);
}

/// Antichains of the poset, counted directly.
fn antichains(poset: &FinitePoset) -> usize {
    let p = poset.size();
    (0u32..1 << p)
        .filter(|s| {
            (0..p).tuple_combinations().all(|(i, j)| {
                !(s >> i & 1 == 1 && s >> j & 1 == 1) || !(poset.leq(i, j) || poset.leq(j, i))
            })
        })
        .count()
}

#[test]
fn downsets_are_in_bijection_with_antichains() {
    for d in corpus(5).unwrap() {
        assert_eq!(d.downsets().len(), antichains(d.poset()));
        assert_eq!(d.lattice().len(), d.downsets().len());
    }
}

#[test]
fn free_distributive_lattice_sizes() {
    let counts: Vec<u64> = (1..=4).map(|v| free_dl_count(v).unwrap()).collect();
    assert_eq!(counts, [1, 4, 18, 166]);
    for v in 1..=4 {
        assert_eq!(free_dl_count(v).unwrap(), nonconstant_monotone_functions(v).unwrap());
    }
}

#[test]
fn order_statistics_match_sorted_fibers() {
    for trial in 0..300 {
        let mut rng = case_rng(17, trial);
        let n = rng.gen_range(1..=6);
        let m = rng.gen_range(1..=5);
        let raw: Vec<Vec<i64>> = (0..n).map(|_| (0..m).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let fs: Vec<ExactTuple> = raw.iter().map(|r| ExactTuple::from_ints(r)).collect();
        let to = total_orderization(&latticemed::pointwise::Pointwise::<Q>::new(m), &fs).unwrap();
        for k in 1..=n {
            let expected: Vec<i64> = (0..m)
                .map(|c| raw.iter().map(|r| r[c]).sorted().nth(k - 1).unwrap())
                .collect();
            assert_eq!(m_k_pointwise(&fs, k).unwrap(), ExactTuple::from_ints(&expected));
            assert_eq!(to.get(k), &ExactTuple::from_ints(&expected));
        }
    }
}

#[test]
fn median_of_a_chain_is_the_middle_element() {
    let l = latticemed::FiniteLattice::chain(5).unwrap();
    let ids: Vec<_> = l.elements().unwrap();
    for xs in ids.iter().cloned().permutations(3) {
        let mid = xs.iter().copied().sorted_by_key(|e| e.0).nth(1).unwrap();
        assert_eq!(latticemed::median3(&l, &xs[0], &xs[1], &xs[2]).unwrap(), mid);
    }
}
