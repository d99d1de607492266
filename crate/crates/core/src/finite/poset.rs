//! Small posets up to isomorphism and their downset lattices.

use std::collections::BTreeSet;

use itertools::Itertools;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{FiniteLattice, LatticeJson};

pub const MAX_POSET_SIZE: usize = 6;

/// A finite poset stored as reachability rows: bit `j` of `rows[i]` is set
/// iff `i <= j`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FinitePoset {
    size: usize,
    rows: Vec<u64>,
}

impl FinitePoset {
    pub fn from_rows(size: usize, rows: Vec<u64>) -> Result<Self> {
        if size > 64 || rows.len() != size {
            return Err(Error::Argument(format!("{} rows for a poset of size {size}", rows.len())));
        }
        let p = FinitePoset { size, rows };
        p.validate()?;
        Ok(p)
    }

    /// Builds the poset generated by `covers` (pairs `i < j`) under
    /// reflexive-transitive closure.
    pub fn from_covers(size: usize, covers: &[(usize, usize)]) -> Result<Self> {
        if size > 64 {
            return Err(Error::Unsupported(format!("poset of size {size}")));
        }
        let mut rows: Vec<u64> = (0..size).map(|i| 1u64 << i).collect();
        for &(i, j) in covers {
            if i >= size || j >= size {
                return Err(Error::Argument(format!("cover ({i},{j}) out of range")));
            }
            rows[i] |= 1 << j;
        }
        // Warshall closure
        for k in 0..size {
            for i in 0..size {
                if rows[i] >> k & 1 == 1 {
                    rows[i] |= rows[k];
                }
            }
        }
        Self::from_rows(size, rows)
    }

    pub fn antichain(size: usize) -> Self {
        Self::from_covers(size, &[]).expect("antichain is a poset")
    }

    pub fn chain(size: usize) -> Self {
        let covers: Vec<_> = (1..size).map(|i| (i - 1, i)).collect();
        Self::from_covers(size, &covers).expect("chain is a poset")
    }

    fn validate(&self) -> Result<()> {
        let n = self.size;
        for i in 0..n {
            if !self.leq(i, i) {
                return Err(Error::Argument(format!("not reflexive at {i}")));
            }
            for j in 0..n {
                if i != j && self.leq(i, j) && self.leq(j, i) {
                    return Err(Error::Argument(format!("not antisymmetric at ({i},{j})")));
                }
                for k in 0..n {
                    if self.leq(i, j) && self.leq(j, k) && !self.leq(i, k) {
                        return Err(Error::Argument(format!("not transitive at ({i},{j},{k})")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Hasse diagram edges `(i, j)` with `i ⋖ j`.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.size;
        let lt = |i: usize, j: usize| i != j && self.leq(i, j);
        let mut out = Vec::new();
        for i in 0..n {
            for j in 0..n {
                if lt(i, j) && !(0..n).any(|k| lt(i, k) && lt(k, j)) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    /// Strict relation packed as bits `i * size + j`.
    fn code(&self) -> u64 {
        let n = self.size;
        let mut code = 0u64;
        for i in 0..n {
            for j in 0..n {
                if i != j && self.leq(i, j) {
                    code |= 1 << (i * n + j);
                }
            }
        }
        code
    }

    fn from_code(size: usize, code: u64) -> Self {
        let rows = (0..size)
            .map(|i| {
                let strict = (0..size)
                    .filter(|&j| code >> (i * size + j) & 1 == 1)
                    .fold(0u64, |acc, j| acc | 1 << j);
                strict | 1 << i
            })
            .collect();
        FinitePoset { size, rows }
    }

    /// Relabels element `i` as `perm[i]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        let n = self.size;
        let mut rows = vec![0u64; n];
        for i in 0..n {
            for j in 0..n {
                if self.leq(i, j) {
                    rows[perm[i]] |= 1 << perm[j];
                }
            }
        }
        FinitePoset { size: n, rows }
    }

    /// Smallest relation code over all relabelings; equal for isomorphic
    /// posets. Costs `size!` relabelings.
    pub fn canonical_code(&self) -> u64 {
        (0..self.size)
            .permutations(self.size)
            .map(|perm| self.permuted(&perm).code())
            .min()
            .unwrap_or(0)
    }

    pub fn canonical(&self) -> Self {
        Self::from_code(self.size, self.canonical_code())
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            size: self.size,
            covers: self.covers().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }

    pub fn from_json(j: &PosetJson) -> Result<Self> {
        let covers: Vec<_> = j.covers.iter().map(|c| (c[0], c[1])).collect();
        Self::from_covers(j.size, &covers)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PosetJson {
    pub size: usize,
    pub covers: Vec<[usize; 2]>,
}

/// One representative per isomorphism class of `p`-element posets, in
/// increasing canonical-code order.
///
/// Every poset has a linear extension, so it suffices to scan the
/// naturally labeled relations (`i < j` only if `i < j` as integers) and
/// dedup by canonical code.
pub fn enumerate_posets(p: usize) -> Result<Vec<FinitePoset>> {
    if p > MAX_POSET_SIZE {
        return Err(Error::Unsupported(format!(
            "poset enumeration is capped at {MAX_POSET_SIZE} elements, got {p}"
        )));
    }
    let pairs: Vec<(usize, usize)> = (0..p).tuple_combinations().collect();
    let codes: BTreeSet<u64> = (0u64..1 << pairs.len())
        .into_par_iter()
        .filter_map(|mask| {
            let mut rows: Vec<u64> = (0..p).map(|i| 1u64 << i).collect();
            for (bit, &(i, j)) in pairs.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    rows[i] |= 1 << j;
                }
            }
            let transitive = (0..p).all(|i| {
                (0..p)
                    .filter(|&j| rows[i] >> j & 1 == 1)
                    .all(|j| rows[j] & !rows[i] == 0)
            });
            transitive.then(|| FinitePoset { size: p, rows }.canonical_code())
        })
        .collect();
    Ok(codes.into_iter().map(|c| FinitePoset::from_code(p, c)).collect())
}

/// The lattice of downsets of a poset under ∩ and ∪.
#[derive(Debug, Clone)]
pub struct DownsetLattice {
    poset: FinitePoset,
    downsets: Vec<u64>,
    lattice: FiniteLattice,
}

fn element_label(i: usize) -> char {
    (b'a' + i as u8) as char
}

fn downset_name(mask: u64, size: usize) -> String {
    let inner: Vec<String> = (0..size)
        .filter(|&i| mask >> i & 1 == 1)
        .map(|i| element_label(i).to_string())
        .collect();
    format!("{{{}}}", inner.join(","))
}

impl DownsetLattice {
    pub fn new(poset: &FinitePoset) -> Result<Self> {
        let n = poset.size();
        if n > MAX_POSET_SIZE {
            return Err(Error::Unsupported(format!("downsets of a {n}-element poset")));
        }
        let is_down = |s: u64| {
            (0..n)
                .filter(|&j| s >> j & 1 == 1)
                .all(|j| (0..n).all(|i| !poset.leq(i, j) || s >> i & 1 == 1))
        };
        let mut downsets: Vec<u64> = (0u64..1 << n).filter(|&s| is_down(s)).collect();
        downsets.sort_by_key(|&s| (s.count_ones(), s));
        let index = |s: u64| downsets.binary_search_by_key(&(s.count_ones(), s), |&d| (d.count_ones(), d));
        let size = downsets.len();
        let mut meet = vec![vec![0; size]; size];
        let mut join = vec![vec![0; size]; size];
        for (i, &a) in downsets.iter().enumerate() {
            for (j, &b) in downsets.iter().enumerate() {
                meet[i][j] = index(a & b).expect("downsets closed under intersection");
                join[i][j] = index(a | b).expect("downsets closed under union");
            }
        }
        let names = downsets.iter().map(|&s| downset_name(s, n)).collect();
        let lattice = FiniteLattice::from_tables(names, meet, join, Some(0), Some(size - 1))?;
        Ok(DownsetLattice {
            poset: poset.clone(),
            downsets,
            lattice,
        })
    }

    pub fn poset(&self) -> &FinitePoset {
        &self.poset
    }

    /// Downsets as bitmasks, sorted by (size, mask).
    pub fn downsets(&self) -> &[u64] {
        &self.downsets
    }

    pub fn lattice(&self) -> &FiniteLattice {
        &self.lattice
    }

    pub fn into_lattice(self) -> FiniteLattice {
        self.lattice
    }
}

pub fn downset_lattice(poset: &FinitePoset) -> Result<DownsetLattice> {
    DownsetLattice::new(poset)
}

/// Every canonical poset with at most `max_size` elements, with its
/// downset lattice.
pub fn corpus(max_size: usize) -> Result<Vec<DownsetLattice>> {
    let mut out = Vec::new();
    for p in 0..=max_size {
        for poset in enumerate_posets(p)? {
            out.push(DownsetLattice::new(&poset)?);
        }
    }
    Ok(out)
}

/// Corpus file entry: a poset and its derived lattice.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CorpusEntry {
    pub size: usize,
    pub covers: Vec<[usize; 2]>,
    pub lattice: LatticeJson,
}

/// Canonical corpus JSON: sorted keys, two-space indent, trailing LF.
pub fn corpus_to_json(corpus: &[DownsetLattice]) -> String {
    let entries: Vec<CorpusEntry> = corpus
        .iter()
        .map(|d| {
            let pj = d.poset().to_json();
            CorpusEntry {
                size: pj.size,
                covers: pj.covers,
                lattice: d.lattice().to_json(),
            }
        })
        .collect();
    let value = serde_json::to_value(&entries).expect("corpus serializes");
    let mut text = serde_json::to_string_pretty(&value).expect("corpus serializes");
    text.push('\n');
    text
}

/// Parses a corpus file and checks each stored lattice against the one
/// rebuilt from its poset.
pub fn corpus_from_json(text: &str) -> Result<Vec<DownsetLattice>> {
    let entries: Vec<CorpusEntry> = serde_json::from_str(text)?;
    entries
        .iter()
        .map(|e| {
            let poset = FinitePoset::from_json(&PosetJson {
                size: e.size,
                covers: e.covers.clone(),
            })?;
            let d = DownsetLattice::new(&poset)?;
            let stored = FiniteLattice::from_json(e.lattice.clone())?;
            if stored != *d.lattice() {
                return Err(Error::Format(format!(
                    "stored lattice for poset {:?} does not match its downsets",
                    e.covers
                )));
            }
            Ok(d)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{verify_lattice_laws, Lattice, Strategy};

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_posets(0).unwrap().len(), 1);
        assert_eq!(enumerate_posets(1).unwrap().len(), 1);
        assert_eq!(enumerate_posets(2).unwrap().len(), 2);
        assert_eq!(enumerate_posets(3).unwrap().len(), 5);
        assert!(matches!(enumerate_posets(7), Err(Error::Unsupported(_))));
    }

    #[test]
    fn enumeration_is_deterministic_and_canonical() {
        let a = enumerate_posets(4).unwrap();
        let b = enumerate_posets(4).unwrap();
        assert_eq!(a, b);
        for p in &a {
            assert_eq!(p.canonical(), *p);
        }
    }

    #[test]
    fn invalid_relations_are_rejected() {
        assert!(FinitePoset::from_covers(2, &[(0, 1), (1, 0)]).is_err());
        assert!(FinitePoset::from_rows(2, vec![0b01, 0b00]).is_err());
        assert!(FinitePoset::from_covers(2, &[(0, 5)]).is_err());
    }

    #[test]
    fn covers_of_a_chain() {
        let c = FinitePoset::chain(3);
        assert_eq!(c.covers(), vec![(0, 1), (1, 2)]);
        assert!(c.leq(0, 2));
    }

    #[test]
    fn downsets_of_standard_posets() {
        let anti = downset_lattice(&FinitePoset::antichain(2)).unwrap();
        assert_eq!(anti.lattice().len(), 4);
        let boolean = FiniteLattice::boolean(2).unwrap();
        assert_eq!(anti.lattice().to_json().meet, boolean.to_json().meet);
        assert_eq!(anti.lattice().to_json().join, boolean.to_json().join);

        let chain = downset_lattice(&FinitePoset::chain(3)).unwrap();
        assert_eq!(chain.lattice().len(), 4);
        assert!(crate::lattice::is_chain(chain.lattice(), &chain.lattice().elements().unwrap())
            .unwrap());

        // V: a < b, a < c
        let v = FinitePoset::from_covers(3, &[(0, 1), (0, 2)]).unwrap();
        let d = downset_lattice(&v).unwrap();
        let names: Vec<&str> = d.lattice().names().iter().map(String::as_str).collect();
        assert_eq!(names, ["{}", "{a}", "{a,b}", "{a,c}", "{a,b,c}"]);
        assert_eq!(d.lattice().bottom().unwrap().0, 0);
        assert_eq!(d.lattice().top().unwrap().0, 4);
    }

    #[test]
    fn corpus_lattices_are_distributive() {
        for d in corpus(4).unwrap() {
            let r = verify_lattice_laws(d.lattice(), Strategy::Exhaustive).unwrap();
            assert!(r.all_passed(), "{:?}", d.poset());
        }
    }

    #[test]
    fn corpus_json_is_byte_stable() {
        let c = corpus(3).unwrap();
        let text = corpus_to_json(&c);
        assert!(text.ends_with('\n') && !text.contains('\r'));
        let back = corpus_from_json(&text).unwrap();
        assert_eq!(back.len(), c.len());
        for (a, b) in c.iter().zip(&back) {
            assert_eq!(a.lattice(), b.lattice());
        }
        assert_eq!(corpus_to_json(&back), text);
        // sorted keys inside lattice objects
        let bottom = text.find("\"bottom\"").unwrap();
        let elements = text.find("\"elements\"").unwrap();
        assert!(bottom < elements);
    }

    #[test]
    fn tampered_corpus_is_rejected() {
        let text = corpus_to_json(&corpus(2).unwrap());
        let tampered = text.replacen("\"top\": 1", "\"top\": 0", 1);
        assert_ne!(tampered, text);
        assert!(corpus_from_json(&tampered).is_err());
    }
}
