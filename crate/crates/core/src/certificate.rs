//! Pass/fail verdicts with replayable counterexamples.

use rayon::prelude::*;

use crate::error::Result;

/// A failing input: `lhs` was computed from `input`, `rhs` from
/// `counterpart` (empty when `rhs` is a constant such as zero).
#[derive(Debug, Clone, PartialEq)]
pub struct Witness<E, V> {
    pub input: Vec<E>,
    pub counterpart: Vec<E>,
    pub lhs: V,
    pub rhs: V,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Certificate<E, V> {
    pub passed: bool,
    pub witness: Option<Witness<E, V>>,
    /// Cases examined (the witness index + 1 on failure).
    pub trials: usize,
    pub seed: Option<u64>,
}

impl<E, V> Certificate<E, V> {
    pub fn pass(trials: usize, seed: Option<u64>) -> Self {
        Certificate {
            passed: true,
            witness: None,
            trials,
            seed,
        }
    }

    pub fn fail(witness: Witness<E, V>, trials: usize, seed: Option<u64>) -> Self {
        Certificate {
            passed: false,
            witness: Some(witness),
            trials,
            seed,
        }
    }

    /// Recomputes both sides of the witness. True iff there is a witness
    /// and it still fails.
    pub fn replay(
        &self,
        lhs: impl Fn(&[E]) -> Result<V>,
        rhs: impl Fn(&[E]) -> Result<V>,
        same: impl Fn(&V, &V) -> bool,
    ) -> Result<bool> {
        match &self.witness {
            None => Ok(false),
            Some(w) => Ok(!same(&lhs(&w.input)?, &rhs(&w.counterpart)?)),
        }
    }
}

/// Runs `probe` on `0..count` in parallel and returns the lowest index
/// that produced a failure (or an error), so results do not depend on
/// scheduling.
pub(crate) fn first_failure<T: Send>(
    count: usize,
    probe: impl Fn(usize) -> Result<Option<T>> + Sync,
) -> Result<Option<(usize, T)>> {
    let found = (0..count).into_par_iter().find_map_first(|i| match probe(i) {
        Ok(None) => None,
        Ok(Some(t)) => Some(Ok((i, t))),
        Err(e) => Some(Err(e)),
    });
    found.transpose()
}

/// Turns the outcome of [`first_failure`] into a certificate.
pub(crate) fn certify<E, V>(
    count: usize,
    seed: Option<u64>,
    found: Option<(usize, Witness<E, V>)>,
) -> Certificate<E, V> {
    match found {
        None => Certificate::pass(count, seed),
        Some((i, w)) => Certificate::fail(w, i + 1, seed),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_failing_index_wins() {
        let found = first_failure(10_000, |i| Ok((i % 97 == 13 && i > 100).then_some(i))).unwrap();
        assert_eq!(found, Some((110, 110)));
        assert_eq!(first_failure(50, |_| Ok(None::<()>)).unwrap(), None);
    }

    #[test]
    fn replay_reproduces_failures() {
        let w = Witness {
            input: vec![2],
            counterpart: vec![3],
            lhs: 2,
            rhs: 3,
        };
        let c = certify(10, Some(1), Some((4, w)));
        assert!(!c.passed);
        assert_eq!(c.trials, 5);
        assert!(c.replay(|x| Ok(x[0]), |x| Ok(x[0]), |a, b| a == b).unwrap());
        let p: Certificate<i32, i32> = certify(10, None, None);
        assert!(!p.replay(|x| Ok(x[0]), |x| Ok(x[0]), |a, b| a == b).unwrap());
    }
}
