//! Lattice terms and their canonical monotone normal forms.
//!
//! A term built from variables with meet and join denotes an element of
//! the free distributive lattice. Its normal form is the antichain of
//! variable sets of the join-of-meets expansion, with non-minimal sets
//! pruned. Constants never arise, so the empty antichain is excluded.

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;

use crate::error::{Error, Result};
use crate::lattice::Lattice;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum LatticeTerm {
    Var(usize),
    Meet(Vec<LatticeTerm>),
    Join(Vec<LatticeTerm>),
}

/// Default variable names: a..z, then x26, x27, ...
pub fn var_name(i: usize) -> String {
    if i < 26 {
        ((b'a' + i as u8) as char).to_string()
    } else {
        format!("x{i}")
    }
}

impl LatticeTerm {
    pub fn var(i: usize) -> Self {
        LatticeTerm::Var(i)
    }

    /// Meet of the children; a single child is returned as is.
    pub fn meet(mut children: Vec<LatticeTerm>) -> Self {
        assert!(!children.is_empty(), "meet of no terms");
        if children.len() == 1 {
            children.pop().unwrap()
        } else {
            LatticeTerm::Meet(children)
        }
    }

    /// Join of the children; a single child is returned as is.
    pub fn join(mut children: Vec<LatticeTerm>) -> Self {
        assert!(!children.is_empty(), "join of no terms");
        if children.len() == 1 {
            children.pop().unwrap()
        } else {
            LatticeTerm::Join(children)
        }
    }

    pub fn median(x: LatticeTerm, y: LatticeTerm, z: LatticeTerm) -> Self {
        Self::m_k(vec![x, y, z], 2).expect("k = 2 is valid for three arguments")
    }

    /// `M_k` as a join over `(n+1-k)`-subsets of their meets.
    pub fn m_k(args: Vec<LatticeTerm>, k: usize) -> Result<Self> {
        let size = (args.len() + 1).saturating_sub(k);
        Self::subset_form(args, k, size, LatticeTerm::meet, LatticeTerm::join)
    }

    /// `M_k` as a meet over `k`-subsets of their joins.
    pub fn m_k_dual(args: Vec<LatticeTerm>, k: usize) -> Result<Self> {
        Self::subset_form(args, k, k, LatticeTerm::join, LatticeTerm::meet)
    }

    fn subset_form(
        args: Vec<LatticeTerm>,
        k: usize,
        size: usize,
        inner: fn(Vec<LatticeTerm>) -> LatticeTerm,
        outer: fn(Vec<LatticeTerm>) -> LatticeTerm,
    ) -> Result<Self> {
        let n = args.len();
        if n == 0 || k == 0 || k > n {
            return Err(Error::Argument(format!(
                "M{k} needs 1 <= k <= number of arguments ({n})"
            )));
        }
        let parts = args
            .iter()
            .cloned()
            .combinations(size)
            .map(inner)
            .collect();
        Ok(outer(parts))
    }

    /// One past the largest variable index.
    pub fn var_count(&self) -> usize {
        match self {
            LatticeTerm::Var(i) => i + 1,
            LatticeTerm::Meet(c) | LatticeTerm::Join(c) => {
                c.iter().map(LatticeTerm::var_count).max().unwrap_or(0)
            }
        }
    }

    pub fn rename(&self, f: &impl Fn(usize) -> usize) -> Self {
        match self {
            LatticeTerm::Var(i) => LatticeTerm::Var(f(*i)),
            LatticeTerm::Meet(c) => LatticeTerm::Meet(c.iter().map(|t| t.rename(f)).collect()),
            LatticeTerm::Join(c) => LatticeTerm::Join(c.iter().map(|t| t.rename(f)).collect()),
        }
    }

    /// Evaluates with variable `i` bound to `binding[i]`.
    pub fn eval<L: Lattice + ?Sized>(&self, l: &L, binding: &[L::Elem]) -> Result<L::Elem> {
        match self {
            LatticeTerm::Var(i) => {
                let x = binding.get(*i).ok_or_else(|| Error::Binding(var_name(*i)))?;
                crate::lattice::ensure_member(l, x)?;
                Ok(x.clone())
            }
            LatticeTerm::Meet(c) | LatticeTerm::Join(c) => {
                let is_meet = matches!(self, LatticeTerm::Meet(_));
                let mut vals = c.iter().map(|t| t.eval(l, binding));
                let mut acc = vals
                    .next()
                    .ok_or_else(|| Error::Argument("empty meet/join".into()))??;
                for v in vals {
                    let v = v?;
                    acc = if is_meet { l.meet(&acc, &v) } else { l.join(&acc, &v) };
                }
                Ok(acc)
            }
        }
    }

    /// Boolean evaluation with variable `i` set to bit `i` of `assignment`.
    pub fn eval_bool(&self, assignment: u32) -> bool {
        match self {
            LatticeTerm::Var(i) => assignment >> i & 1 == 1,
            LatticeTerm::Meet(c) => c.iter().all(|t| t.eval_bool(assignment)),
            LatticeTerm::Join(c) => c.iter().any(|t| t.eval_bool(assignment)),
        }
    }

    /// Prints with `&`/`|`, parenthesizing so that re-parsing yields the
    /// same tree.
    pub fn display_with<'a>(&'a self, names: &'a [String]) -> TermDisplay<'a> {
        TermDisplay { term: self, names }
    }

    pub fn normal_form(&self, vars: usize) -> Result<MonotoneNormalForm> {
        term_normal_form(self, vars)
    }
}

pub struct TermDisplay<'a> {
    term: &'a LatticeTerm,
    names: &'a [String],
}

impl TermDisplay<'_> {
    fn write(&self, t: &LatticeTerm, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match t {
            LatticeTerm::Var(i) => match self.names.get(*i) {
                Some(n) => write!(f, "{n}"),
                None => write!(f, "{}", var_name(*i)),
            },
            LatticeTerm::Meet(c) => {
                for (i, child) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, " & ")?;
                    }
                    if matches!(child, LatticeTerm::Var(_)) {
                        self.write(child, f)?;
                    } else {
                        write!(f, "(")?;
                        self.write(child, f)?;
                        write!(f, ")")?;
                    }
                }
                Ok(())
            }
            LatticeTerm::Join(c) => {
                for (i, child) in c.iter().enumerate() {
                    if i > 0 {
                        write!(f, " | ")?;
                    }
                    if matches!(child, LatticeTerm::Join(_)) {
                        write!(f, "(")?;
                        self.write(child, f)?;
                        write!(f, ")")?;
                    } else {
                        self.write(child, f)?;
                    }
                }
                Ok(())
            }
        }
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(self.term, f)
    }
}

impl fmt::Display for LatticeTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.display_with(&[]).fmt(f)
    }
}

// ---------------------------------------------------------------------------

/// Canonical antichain of variable sets (bitmasks), sorted by size and
/// then lexicographically by member indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonotoneNormalForm {
    vars: usize,
    sets: Vec<u32>,
}

fn members(s: u32) -> impl Iterator<Item = usize> {
    (0..32).filter(move |&i| s >> i & 1 == 1)
}

fn canonical_order(a: &u32, b: &u32) -> Ordering {
    a.count_ones()
        .cmp(&b.count_ones())
        .then_with(|| members(*a).cmp(members(*b)))
}

/// Drops every set that strictly contains another, dedups, and sorts.
fn minimize(mut sets: Vec<u32>) -> Vec<u32> {
    sets.sort_by_key(|s| s.count_ones());
    sets.dedup();
    let mut kept: Vec<u32> = Vec::with_capacity(sets.len());
    for s in sets {
        if !kept.iter().any(|&k| k & !s == 0) {
            kept.push(s);
        }
    }
    kept.sort_by(canonical_order);
    kept
}

impl MonotoneNormalForm {
    /// Builds a normal form from arbitrary nonempty sets, minimizing them.
    pub fn from_sets(vars: usize, sets: Vec<u32>) -> Result<Self> {
        if vars > 32 {
            return Err(Error::Unsupported(format!("{vars} variables")));
        }
        if sets.is_empty() || sets.contains(&0) {
            return Err(Error::Argument("normal forms exclude constants".into()));
        }
        if sets.iter().any(|&s| vars < 32 && s >> vars != 0) {
            return Err(Error::Argument(format!("set uses a variable beyond {vars}")));
        }
        Ok(MonotoneNormalForm {
            vars,
            sets: minimize(sets),
        })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn sets(&self) -> &[u32] {
        &self.sets
    }

    pub fn join(&self, other: &Self) -> Self {
        let mut sets = self.sets.clone();
        sets.extend_from_slice(&other.sets);
        MonotoneNormalForm {
            vars: self.vars.max(other.vars),
            sets: minimize(sets),
        }
    }

    pub fn meet(&self, other: &Self) -> Self {
        let sets = self
            .sets
            .iter()
            .flat_map(|a| other.sets.iter().map(move |b| a | b))
            .collect();
        MonotoneNormalForm {
            vars: self.vars.max(other.vars),
            sets: minimize(sets),
        }
    }

    pub fn eval_bool(&self, assignment: u32) -> bool {
        self.sets.iter().any(|&s| s & !assignment == 0)
    }

    pub fn to_term(&self) -> LatticeTerm {
        LatticeTerm::join(
            self.sets
                .iter()
                .map(|&s| LatticeTerm::meet(members(s).map(LatticeTerm::Var).collect()))
                .collect(),
        )
    }
}

impl fmt::Display for MonotoneNormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .sets
            .iter()
            .map(|&s| format!("{{{}}}", members(s).map(var_name).join(",")))
            .collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

pub fn term_normal_form(t: &LatticeTerm, vars: usize) -> Result<MonotoneNormalForm> {
    match t {
        LatticeTerm::Var(i) => {
            if *i >= vars || *i >= 32 {
                return Err(Error::Argument(format!(
                    "variable {} outside the {vars} declared variables",
                    var_name(*i)
                )));
            }
            Ok(MonotoneNormalForm {
                vars,
                sets: vec![1 << i],
            })
        }
        LatticeTerm::Meet(c) | LatticeTerm::Join(c) => {
            let mut forms = c.iter().map(|x| term_normal_form(x, vars));
            let mut acc = forms
                .next()
                .ok_or_else(|| Error::Argument("empty meet/join".into()))??;
            for nf in forms {
                let nf = nf?;
                acc = match t {
                    LatticeTerm::Meet(_) => acc.meet(&nf),
                    _ => acc.join(&nf),
                };
            }
            Ok(acc)
        }
    }
}

/// Number of distinct normal forms on `v` variables, by enumerating
/// antichains of nonempty subsets.
pub fn free_dl_count(v: usize) -> Result<u64> {
    if !(1..=4).contains(&v) {
        return Err(Error::Unsupported(format!("free lattice count needs 1 <= v <= 4, got {v}")));
    }
    let subsets: Vec<u32> = (1u32..1 << v).collect();
    let count = (1u64..1 << subsets.len())
        .filter(|&family| {
            let chosen: Vec<u32> = subsets
                .iter()
                .enumerate()
                .filter(|(i, _)| family >> i & 1 == 1)
                .map(|(_, &s)| s)
                .collect();
            chosen
                .iter()
                .tuple_combinations()
                .all(|(a, b)| a & !b != 0 && b & !a != 0)
        })
        .count();
    Ok(count as u64)
}

/// Number of nonconstant monotone Boolean functions of `v` inputs, by
/// truth-table enumeration. Cross-checks [`free_dl_count`].
pub fn nonconstant_monotone_functions(v: usize) -> Result<u64> {
    if !(1..=4).contains(&v) {
        return Err(Error::Unsupported(format!("needs 1 <= v <= 4, got {v}")));
    }
    let points = 1u32 << v;
    let monotone = (0u64..1 << points)
        .filter(|&table| {
            (0..points).all(|x| {
                (0..v).all(|i| {
                    let up = x | 1 << i;
                    table >> x & 1 <= table >> up & 1
                })
            })
        })
        .count() as u64;
    Ok(monotone - 2)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicCheck {
    pub identity: &'static str,
    pub k: usize,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SymbolicReport {
    pub n: usize,
    pub checks: Vec<SymbolicCheck>,
}

impl SymbolicReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Checks the `M_k` identities as equalities of normal forms:
/// permutation invariance, primal = dual, and `M_k ∧ M_{k+1} = M_k`.
pub fn verify_mk_symbolic(n: usize) -> Result<SymbolicReport> {
    if !(2..=4).contains(&n) {
        return Err(Error::Argument(format!("symbolic check needs 2 <= n <= 4, got {n}")));
    }
    let vars: Vec<LatticeTerm> = (0..n).map(LatticeTerm::Var).collect();
    let mut checks = Vec::new();
    let mut forms = Vec::with_capacity(n);
    for k in 1..=n {
        let primal = LatticeTerm::m_k(vars.clone(), k)?;
        let nf = term_normal_form(&primal, n)?;
        let symmetric = (0..n).permutations(n).all(|perm| {
            let renamed = primal.rename(&|i| perm[i]);
            term_normal_form(&renamed, n).is_ok_and(|other| other == nf)
        });
        checks.push(SymbolicCheck {
            identity: "symmetry",
            k,
            passed: symmetric,
        });
        let dual = term_normal_form(&LatticeTerm::m_k_dual(vars.clone(), k)?, n)?;
        checks.push(SymbolicCheck {
            identity: "primal-dual",
            k,
            passed: dual == nf,
        });
        forms.push(nf);
    }
    for k in 1..n {
        checks.push(SymbolicCheck {
            identity: "chain",
            k,
            passed: forms[k - 1].meet(&forms[k]) == forms[k - 1],
        });
    }
    Ok(SymbolicReport { n, checks })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Chain;
    use crate::scalar::Q;
    use proptest::prelude::*;

    fn v(i: usize) -> LatticeTerm {
        LatticeTerm::Var(i)
    }

    #[test]
    fn median_normal_form() {
        let m = LatticeTerm::median(v(0), v(1), v(2));
        assert_eq!(m.normal_form(3).unwrap().to_string(), "{{a,b},{a,c},{b,c}}");
    }

    #[test]
    fn absorption_and_total_meet() {
        let t = LatticeTerm::meet(vec![v(0), LatticeTerm::join(vec![v(0), v(1)])]);
        assert_eq!(t.normal_form(2).unwrap().to_string(), "{{a}}");
        let m1 = LatticeTerm::m_k(vec![v(0), v(1), v(2)], 1).unwrap();
        assert_eq!(m1.normal_form(3).unwrap().to_string(), "{{a,b,c}}");
        assert_eq!(m1, LatticeTerm::Meet(vec![v(0), v(1), v(2)]));
    }

    #[test]
    fn eval_on_chains_and_errors() {
        let r = Chain::<Q>::unbounded();
        let b = [Q::from(3), Q::from(1), Q::from(2)];
        assert_eq!(v(0).eval(&r, &b).unwrap(), Q::from(3));
        let absorb = LatticeTerm::meet(vec![v(0), LatticeTerm::join(vec![v(0), v(1)])]);
        assert_eq!(absorb.eval(&r, &b).unwrap(), Q::from(3));
        let med = LatticeTerm::median(v(0), v(1), v(2));
        assert_eq!(med.eval(&r, &b).unwrap(), Q::from(2));
        assert!(matches!(v(5).eval(&r, &b), Err(Error::Binding(_))));
        assert!(v(4).normal_form(3).is_err());
    }

    #[test]
    fn free_distributive_lattice_counts() {
        let expected = [1, 4, 18, 166];
        for (i, &e) in expected.iter().enumerate() {
            let v = i + 1;
            assert_eq!(free_dl_count(v).unwrap(), e);
            assert_eq!(nonconstant_monotone_functions(v).unwrap(), e);
        }
        assert!(free_dl_count(5).is_err());
        assert!(free_dl_count(0).is_err());
    }

    #[test]
    fn symbolic_mk_identities() {
        for n in 2..=4 {
            let r = verify_mk_symbolic(n).unwrap();
            assert!(r.all_passed(), "{r:?}");
            assert_eq!(r.checks.len(), 2 * n + n - 1);
        }
        assert!(verify_mk_symbolic(5).is_err());
    }

    #[test]
    fn normal_form_ops() {
        let a = MonotoneNormalForm::from_sets(3, vec![0b011, 0b001]).unwrap();
        assert_eq!(a.sets(), &[0b001]);
        assert!(MonotoneNormalForm::from_sets(3, vec![]).is_err());
        assert!(MonotoneNormalForm::from_sets(2, vec![0b100]).is_err());
        let b = MonotoneNormalForm::from_sets(3, vec![0b110]).unwrap();
        assert_eq!(a.meet(&b).sets(), &[0b111]);
        assert_eq!(a.join(&b).sets(), &[0b001, 0b110]);
        assert_eq!(term_normal_form(&a.join(&b).to_term(), 3).unwrap(), a.join(&b));
    }

    fn arb_term(vars: usize) -> impl proptest::strategy::Strategy<Value = LatticeTerm> {
        let leaf = (0..vars).prop_map(LatticeTerm::Var);
        leaf.prop_recursive(4, 24, 3, |inner| {
            prop_oneof![
                proptest::collection::vec(inner.clone(), 2..4).prop_map(LatticeTerm::Meet),
                proptest::collection::vec(inner, 2..4).prop_map(LatticeTerm::Join),
            ]
        })
    }

    fn truth_table(t: &LatticeTerm, vars: usize) -> Vec<bool> {
        (0..1u32 << vars).map(|x| t.eval_bool(x)).collect()
    }

    proptest! {
        #[test]
        fn normal_forms_agree_iff_truth_tables_agree(s in arb_term(4), t in arb_term(4)) {
            let same_nf = s.normal_form(4).unwrap() == t.normal_form(4).unwrap();
            prop_assert_eq!(same_nf, truth_table(&s, 4) == truth_table(&t, 4));
            let nf = s.normal_form(4).unwrap();
            prop_assert_eq!(truth_table(&nf.to_term(), 4), truth_table(&s, 4));
        }
    }
}
