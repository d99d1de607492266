use std::sync::Arc;

use latticemed::finite::corpus;
use latticemed::invariance::{is_symmetric_map, is_toi, make_toi_map, MapUnderTest};
use latticemed::multilinear::{is_orthosymmetric, Mode, MultilinearMap};
use latticemed::rng::{case_rng, derive_seed};
use latticemed::{ElemId, ExactTuple, FiniteLattice, Strategy, Q};
use proptest::prelude::*;

fn small_lattices() -> Vec<Arc<FiniteLattice>> {
    corpus(4)
        .unwrap()
        .into_iter()
        .map(|d| d.into_lattice())
        .filter(|l| l.len() <= 8)
        .map(Arc::new)
        .collect()
}

fn code(t: &[ElemId], size: usize) -> u64 {
    t.iter().fold(0, |acc, e| acc * size as u64 + e.0 as u64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn constructed_maps_are_toi(index in 0usize..40, n in 1usize..=3, seed in any::<u64>()) {
        let lattices = small_lattices();
        let l = Arc::clone(&lattices[index % lattices.len()]);
        let size = l.len();
        let map = make_toi_map(l, n, "table", move |t: &[ElemId]| Ok(derive_seed(seed, code(t, size)) % 4));
        prop_assert!(is_toi(&map, Strategy::Exhaustive).unwrap().passed);
    }

    #[test]
    fn toi_maps_are_symmetric(index in 0usize..40, n in 2usize..=3, seed in any::<u64>(), range in 1u64..4) {
        let lattices = small_lattices();
        let l = Arc::clone(&lattices[index % lattices.len()]);
        let size = l.len();
        let raw = MapUnderTest::new(l, n, "raw", move |xs: &[ElemId]| Ok(derive_seed(seed, code(xs, size)) % range));
        let toi = is_toi(&raw, Strategy::Exhaustive).unwrap();
        if toi.passed {
            prop_assert!(is_symmetric_map(&raw, Strategy::Exhaustive).unwrap().passed);
        } else {
            let w = toi.witness.as_ref().unwrap();
            prop_assert_eq!(raw.eval(&w.input).unwrap(), w.lhs);
            prop_assert!(toi.replay(|x| raw.eval(x), |x| raw.eval(x), |a, b| a == b).unwrap());
        }
    }

    #[test]
    fn orthosymmetry_witnesses_replay(seed in any::<u64>(), n in 2usize..=3, m in 2usize..=4) {
        let mut rng = case_rng(seed, 0);
        let t = MultilinearMap::random(n, m, 1, 0.3, &mut rng).unwrap();
        for mode in [Mode::Exact, Mode::Sampled { trials: 100, seed }] {
            let c = is_orthosymmetric(&t, mode).unwrap();
            if !c.passed {
                let zero = |_: &[ExactTuple]| Ok(ExactTuple::zeros(1));
                prop_assert!(c.replay(|x| t.eval(x), zero, |a, b| a == b).unwrap());
            }
        }
    }

    #[test]
    fn sum_and_product_identities(seed in any::<u64>(), n in 1usize..=5, m in 1usize..=6) {
        use rand::Rng;
        let mut rng = case_rng(seed, 1);
        let fs: Vec<ExactTuple> = (0..n)
            .map(|_| ExactTuple::new((0..m).map(|_| Q::new(rng.gen_range(-20..=20), rng.gen_range(1..=6))).collect()))
            .collect();
        prop_assert!(latticemed::vector::sum_invariance_check(&fs).unwrap());
        prop_assert!(latticemed::vector::product_invariance_check(&fs).unwrap());
    }
}
