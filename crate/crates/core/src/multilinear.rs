//! Multilinear maps ℝ^m × ... × ℝ^m → ℝ^p as dense coefficient tensors,
//! the homogeneous polynomials they generate, power sums, and deciders
//! for orthosymmetry, orthogonal additivity and orthogonal steadiness.
//!
//! Every multilinear map on a finite-dimensional space is bounded, so
//! boundedness is not modeled.
//!
//! The exact deciders rest on two facts:
//! - `T` is orthosymmetric iff its tensor is diagonal. Basis tuples with
//!   two distinct indices are disjoint, and a diagonal `T` has a zero
//!   factor in every term on a disjoint pair.
//! - On a fixed support split, `P(f+g) - P(f) - P(g)` is a polynomial of
//!   degree `<= n` in each coordinate. It vanishes identically iff it
//!   vanishes on a grid of `n+1` values per coordinate.

use itertools::Itertools;
use num_integer::binomial;
use rand::Rng;
use serde_json::{json, Value};

use crate::certificate::{certify, first_failure, Certificate, Witness};
use crate::error::{Error, Result};
use crate::rng::{case_rng, CaseRng};
use crate::scalar::{Scalar, Q};
use crate::tuple::{common_dim, CoordTuple, ExactTuple, RealTuple};
use crate::vector::root_power;

pub const MAX_ORDER: usize = 4;
pub const MAX_DIM: usize = 6;
pub const MAX_CODIM: usize = 3;

/// Enumeration budget for the exact deciders.
const EXACT_BUDGET: usize = 2_000_000;

#[derive(Debug, Clone, PartialEq)]
pub struct MultilinearMap<S> {
    order: usize,
    dim: usize,
    codim: usize,
    /// Row-major over index tuples, first slot most significant.
    entries: Vec<CoordTuple<S>>,
}

fn check_shape(order: usize, dim: usize, codim: usize) -> Result<()> {
    if order == 0 || dim == 0 || codim == 0 {
        return Err(Error::Argument(format!(
            "order, dim and codim must be positive (got {order}, {dim}, {codim})"
        )));
    }
    if order > MAX_ORDER || dim > MAX_DIM || codim > MAX_CODIM {
        return Err(Error::Unsupported(format!(
            "tensor shape n={order}, m={dim}, p={codim} exceeds caps n<={MAX_ORDER}, m<={MAX_DIM}, p<={MAX_CODIM}"
        )));
    }
    Ok(())
}

fn pow<S: Scalar>(x: &S, n: usize) -> S {
    (0..n).fold(S::one(), |acc, _| acc * x.clone())
}

impl<S: Scalar> MultilinearMap<S> {
    pub fn zeros(order: usize, dim: usize, codim: usize) -> Result<Self> {
        check_shape(order, dim, codim)?;
        Ok(MultilinearMap {
            order,
            dim,
            codim,
            entries: vec![CoordTuple::zeros(codim); dim.pow(order as u32)],
        })
    }

    /// Builds a tensor from explicit entries; unlisted entries are zero and
    /// repeated indices accumulate.
    pub fn from_entries(
        order: usize,
        dim: usize,
        codim: usize,
        entries: impl IntoIterator<Item = (Vec<usize>, CoordTuple<S>)>,
    ) -> Result<Self> {
        let mut t = Self::zeros(order, dim, codim)?;
        for (index, value) in entries {
            let at = t.flat(&index)?;
            if value.dim() != codim {
                return Err(Error::Argument(format!(
                    "entry value has dimension {}, expected {codim}",
                    value.dim()
                )));
            }
            t.entries[at] = &t.entries[at] + &value;
        }
        Ok(t)
    }

    /// `T(f_1..f_n) = Σ_a c_a f_1(a)...f_n(a)` with `c_a = weights[a]`.
    pub fn diagonal(order: usize, weights: &[CoordTuple<S>]) -> Result<Self> {
        let codim = common_dim(weights)?;
        Self::from_entries(
            order,
            weights.len(),
            codim,
            weights.iter().enumerate().map(|(a, c)| (vec![a; order], c.clone())),
        )
    }

    /// A tensor with one nonzero entry.
    pub fn single(order: usize, dim: usize, index: &[usize], value: CoordTuple<S>) -> Result<Self> {
        let codim = value.dim();
        Self::from_entries(order, dim, codim, [(index.to_vec(), value)])
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn codim(&self) -> usize {
        self.codim
    }

    fn flat(&self, index: &[usize]) -> Result<usize> {
        if index.len() != self.order || index.iter().any(|&i| i >= self.dim) {
            return Err(Error::Argument(format!(
                "index {index:?} invalid for order {} and dimension {}",
                self.order, self.dim
            )));
        }
        Ok(index.iter().fold(0, |acc, &i| acc * self.dim + i))
    }

    fn unflat(&self, mut code: usize) -> Vec<usize> {
        let mut index = vec![0; self.order];
        for slot in index.iter_mut().rev() {
            *slot = code % self.dim;
            code /= self.dim;
        }
        index
    }

    pub fn entry(&self, index: &[usize]) -> Result<&CoordTuple<S>> {
        Ok(&self.entries[self.flat(index)?])
    }

    /// Nonzero entries in index order.
    pub fn nonzero_entries(&self) -> Vec<(Vec<usize>, &CoordTuple<S>)> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(code, v)| (self.unflat(code), v))
            .collect()
    }

    pub fn eval(&self, fs: &[CoordTuple<S>]) -> Result<CoordTuple<S>> {
        if fs.len() != self.order {
            return Err(Error::Argument(format!(
                "order-{} map applied to {} arguments",
                self.order,
                fs.len()
            )));
        }
        if let Some(f) = fs.iter().find(|f| f.dim() != self.dim) {
            return Err(Error::Argument(format!(
                "argument of dimension {} for a map on dimension {}",
                f.dim(),
                self.dim
            )));
        }
        let mut acc = vec![S::zero(); self.codim];
        for (code, value) in self.entries.iter().enumerate() {
            if value.is_zero() {
                continue;
            }
            let index = self.unflat(code);
            let weight = index
                .iter()
                .zip(fs)
                .fold(S::one(), |w, (&i, f)| w * f.get(i).clone());
            if weight.is_zero() {
                continue;
            }
            for (slot, v) in acc.iter_mut().zip(value.coords()) {
                *slot = slot.clone() + weight.clone() * v.clone();
            }
        }
        Ok(CoordTuple::new(acc))
    }

    /// Average of the entries over all permutations of the slots.
    pub fn symmetrize(&self) -> Self {
        let perms: Vec<Vec<usize>> = (0..self.order).permutations(self.order).collect();
        let count = S::from_int(perms.len() as i64);
        let entries = (0..self.entries.len())
            .map(|code| {
                let index = self.unflat(code);
                let sum = perms.iter().fold(CoordTuple::zeros(self.codim), |acc, p| {
                    let permuted: Vec<usize> = p.iter().map(|&s| index[s]).collect();
                    &acc + &self.entries[self.flat(&permuted).expect("valid index")]
                });
                sum.map(|c| c.clone() / count.clone())
            })
            .collect();
        MultilinearMap {
            entries,
            ..self.clone()
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.symmetrize() == *self
    }

    /// First index (in index order) with a nonzero entry off the diagonal.
    pub fn off_diagonal_support(&self) -> Option<Vec<usize>> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(code, _)| self.unflat(code))
            .find(|index| index.iter().any(|&i| i != index[0]))
    }

    pub fn is_diagonal(&self) -> bool {
        self.off_diagonal_support().is_none()
    }

    /// `P_T(f) = T(f, ..., f)`.
    pub fn polynomial(&self) -> HomogeneousPolynomial<S> {
        HomogeneousPolynomial::Generated(self.clone())
    }

    /// `{"order", "dim", "codim", "entries": [{"index", "value"}]}`; zero
    /// entries are omitted.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .nonzero_entries()
            .into_iter()
            .map(|(index, v)| {
                json!({
                    "index": index,
                    "value": v.coords().iter().map(Scalar::to_json).collect::<Vec<_>>(),
                })
            })
            .collect();
        json!({
            "order": self.order,
            "dim": self.dim,
            "codim": self.codim,
            "entries": entries,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let field = |name: &str| {
            v.get(name)
                .and_then(Value::as_u64)
                .map(|x| x as usize)
                .ok_or_else(|| Error::Format(format!("tensor needs an integer {name:?}")))
        };
        let (order, dim, codim) = (field("order")?, field("dim")?, field("codim")?);
        let raw = v
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Format("tensor needs an \"entries\" array".into()))?;
        let mut entries = Vec::with_capacity(raw.len());
        for e in raw {
            let index: Vec<usize> = serde_json::from_value(
                e.get("index").cloned().unwrap_or(Value::Null),
            )?;
            let value = e
                .get("value")
                .and_then(Value::as_array)
                .ok_or_else(|| Error::Format("entry needs a \"value\" array".into()))?
                .iter()
                .map(S::from_json)
                .collect::<Result<Vec<_>>>()?;
            entries.push((index, CoordTuple::new(value)));
        }
        Self::from_entries(order, dim, codim, entries)
    }
}

impl MultilinearMap<Q> {
    /// Each entry is nonzero with probability `density`, with integer
    /// coordinates in `[-3, 3]`.
    pub fn random(
        order: usize,
        dim: usize,
        codim: usize,
        density: f64,
        rng: &mut CaseRng,
    ) -> Result<Self> {
        let mut t = Self::zeros(order, dim, codim)?;
        for e in t.entries.iter_mut() {
            if rng.gen_bool(density.clamp(0.0, 1.0)) {
                *e = CoordTuple::new((0..codim).map(|_| Q::from(rng.gen_range(-3..=3))).collect());
            }
        }
        Ok(t)
    }

    pub fn to_real(&self) -> MultilinearMap<f64> {
        MultilinearMap {
            order: self.order,
            dim: self.dim,
            codim: self.codim,
            entries: self.entries.iter().map(ExactTuple::to_real).collect(),
        }
    }
}

/// An n-homogeneous polynomial `ℝ^m → ℝ^p`.
#[derive(Debug, Clone, PartialEq)]
pub enum HomogeneousPolynomial<S> {
    /// `P_T(f) = T(f, ..., f)`.
    Generated(MultilinearMap<S>),
    /// `P(f) = Σ_a c_a f(a)^degree`.
    Diagonal {
        degree: usize,
        weights: Vec<CoordTuple<S>>,
    },
}

impl<S: Scalar> HomogeneousPolynomial<S> {
    pub fn diagonal(degree: usize, weights: Vec<CoordTuple<S>>) -> Result<Self> {
        let codim = common_dim(&weights)?;
        check_shape(degree.max(1), weights.len(), codim)?;
        if degree == 0 {
            return Err(Error::Argument("degree must be positive".into()));
        }
        Ok(HomogeneousPolynomial::Diagonal { degree, weights })
    }

    pub fn degree(&self) -> usize {
        match self {
            HomogeneousPolynomial::Generated(t) => t.order(),
            HomogeneousPolynomial::Diagonal { degree, .. } => *degree,
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            HomogeneousPolynomial::Generated(t) => t.dim(),
            HomogeneousPolynomial::Diagonal { weights, .. } => weights.len(),
        }
    }

    pub fn codim(&self) -> usize {
        match self {
            HomogeneousPolynomial::Generated(t) => t.codim(),
            HomogeneousPolynomial::Diagonal { weights, .. } => weights[0].dim(),
        }
    }

    pub fn eval(&self, f: &CoordTuple<S>) -> Result<CoordTuple<S>> {
        match self {
            HomogeneousPolynomial::Generated(t) => t.eval(&vec![f.clone(); t.order()]),
            HomogeneousPolynomial::Diagonal { degree, weights } => {
                if f.dim() != weights.len() {
                    return Err(Error::Argument(format!(
                        "argument of dimension {} for a polynomial on dimension {}",
                        f.dim(),
                        weights.len()
                    )));
                }
                let zero = CoordTuple::zeros(self.codim());
                Ok(weights.iter().zip(f.coords()).fold(zero, |acc, (c, x)| {
                    &acc + &c.scale(&pow(x, *degree))
                }))
            }
        }
    }

    /// The generating multilinear map (diagonal for the diagonal form).
    pub fn generator(&self) -> MultilinearMap<S> {
        match self {
            HomogeneousPolynomial::Generated(t) => t.clone(),
            HomogeneousPolynomial::Diagonal { degree, weights } => {
                MultilinearMap::diagonal(*degree, weights).expect("shape checked on construction")
            }
        }
    }
}

/// `S(u_1, ..., u_r) = Σ P(u_k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PowerSumPolynomial<S> {
    vars: usize,
    generator: HomogeneousPolynomial<S>,
}

impl<S: Scalar> PowerSumPolynomial<S> {
    pub fn new(vars: usize, generator: HomogeneousPolynomial<S>) -> Result<Self> {
        if vars == 0 {
            return Err(Error::Argument("a power sum needs at least one variable".into()));
        }
        Ok(PowerSumPolynomial { vars, generator })
    }

    pub fn vars(&self) -> usize {
        self.vars
    }

    pub fn generator(&self) -> &HomogeneousPolynomial<S> {
        &self.generator
    }

    pub fn eval(&self, us: &[CoordTuple<S>]) -> Result<CoordTuple<S>> {
        if us.len() != self.vars {
            return Err(Error::Argument(format!(
                "power sum in {} variables applied to {} arguments",
                self.vars,
                us.len()
            )));
        }
        let mut acc = CoordTuple::zeros(self.generator.codim());
        for u in us {
            acc = &acc + &self.generator.eval(u)?;
        }
        Ok(acc)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Mode {
    Exact,
    Sampled { trials: usize, seed: u64 },
}

pub type TupleCertificate = Certificate<ExactTuple, ExactTuple>;

fn random_values(rng: &mut CaseRng, dim: usize, positive: bool) -> ExactTuple {
    let lo = if positive { 0 } else { -3 };
    CoordTuple::new((0..dim).map(|_| Q::from(rng.gen_range(lo..=3))).collect())
}

/// A random disjoint pair: coordinates in the mask go to `f`, the rest to `g`.
fn random_disjoint_pair(rng: &mut CaseRng, dim: usize, positive: bool) -> (ExactTuple, ExactTuple) {
    let mask: u32 = rng.gen_range(0..1 << dim);
    let values = random_values(rng, dim, positive);
    let more = random_values(rng, dim, positive);
    let f = (0..dim)
        .map(|a| if mask >> a & 1 == 1 { *values.get(a) } else { Q::from(0) })
        .collect();
    let g = (0..dim)
        .map(|a| if mask >> a & 1 == 0 { *more.get(a) } else { Q::from(0) })
        .collect();
    (CoordTuple::new(f), CoordTuple::new(g))
}

/// The exact grid of disjoint pairs for a degree-`n` identity: a support
/// split (bitmask over coordinates) and one grid value per coordinate.
struct DisjointGrid {
    dim: usize,
    values: Vec<Q>,
}

impl DisjointGrid {
    fn new(dim: usize, degree: usize, positive: bool) -> Result<Self> {
        let values: Vec<Q> = if positive {
            (0..=degree as i64).map(Q::from).collect()
        } else {
            let b = degree.div_ceil(2) as i64;
            (-b..=b).map(Q::from).collect()
        };
        let grid = DisjointGrid { dim, values };
        if grid.len() > EXACT_BUDGET {
            return Err(Error::Unsupported(format!(
                "exact enumeration of {} disjoint pairs exceeds the budget",
                grid.len()
            )));
        }
        Ok(grid)
    }

    fn len(&self) -> usize {
        (1usize << self.dim).saturating_mul(self.values.len().saturating_pow(self.dim as u32))
    }

    fn pair(&self, mut code: usize) -> (ExactTuple, ExactTuple) {
        let mask = code % (1 << self.dim);
        code >>= self.dim;
        let k = self.values.len();
        let mut f = Vec::with_capacity(self.dim);
        let mut g = Vec::with_capacity(self.dim);
        for a in 0..self.dim {
            let v = self.values[code % k];
            code /= k;
            if mask >> a & 1 == 1 {
                f.push(v);
                g.push(Q::from(0));
            } else {
                f.push(Q::from(0));
                g.push(v);
            }
        }
        (CoordTuple::new(f), CoordTuple::new(g))
    }
}

/// Decides whether `T` vanishes whenever two of its arguments are disjoint.
pub fn is_orthosymmetric(t: &MultilinearMap<Q>, mode: Mode) -> Result<TupleCertificate> {
    let (n, m) = (t.order(), t.dim());
    match mode {
        Mode::Exact => Ok(match t.off_diagonal_support() {
            None => Certificate::pass(t.entries.len(), None),
            Some(index) => {
                let input: Vec<ExactTuple> = index.iter().map(|&i| CoordTuple::basis(m, i)).collect();
                let lhs = t.eval(&input)?;
                Certificate::fail(
                    Witness {
                        input,
                        counterpart: vec![],
                        lhs,
                        rhs: CoordTuple::zeros(t.codim()),
                    },
                    t.flat(&index)? + 1,
                    None,
                )
            }
        }),
        Mode::Sampled { trials, seed } => {
            let found = first_failure(trials, |trial| {
                let mut rng = case_rng(seed, trial as u64);
                let mut fs: Vec<ExactTuple> = (0..n).map(|_| random_values(&mut rng, m, false)).collect();
                let i = rng.gen_range(0..n);
                if n == 1 {
                    fs[0] = CoordTuple::zeros(m);
                } else {
                    let j = (i + rng.gen_range(1..n)) % n;
                    let (f, g) = random_disjoint_pair(&mut rng, m, false);
                    fs[i] = f;
                    fs[j] = g;
                }
                let value = t.eval(&fs)?;
                Ok((!value.is_zero()).then(|| Witness {
                    input: fs,
                    counterpart: vec![],
                    lhs: value,
                    rhs: CoordTuple::zeros(t.codim()),
                }))
            })?;
            Ok(certify(trials, Some(seed), found))
        }
    }
}

fn additivity_failure(
    p: &HomogeneousPolynomial<Q>,
    f: ExactTuple,
    g: ExactTuple,
) -> Result<Option<Witness<ExactTuple, ExactTuple>>> {
    let lhs = p.eval(&(&f + &g))?;
    let rhs = &p.eval(&f)? + &p.eval(&g)?;
    Ok((lhs != rhs).then(|| Witness {
        input: vec![f.clone(), g.clone()],
        counterpart: vec![f, g],
        lhs,
        rhs,
    }))
}

/// Decides `P(f+g) = P(f) + P(g)` over disjoint pairs of `E` (or of `E⁺`
/// with `positive_only`).
pub fn is_orthogonally_additive(
    p: &HomogeneousPolynomial<Q>,
    positive_only: bool,
    mode: Mode,
) -> Result<TupleCertificate> {
    let m = p.dim();
    match mode {
        Mode::Exact => {
            let grid = DisjointGrid::new(m, p.degree(), positive_only)?;
            let found = first_failure(grid.len(), |code| {
                let (f, g) = grid.pair(code);
                additivity_failure(p, f, g)
            })?;
            Ok(certify(grid.len(), None, found))
        }
        Mode::Sampled { trials, seed } => {
            let found = first_failure(trials, |trial| {
                let mut rng = case_rng(seed, trial as u64);
                let (f, g) = random_disjoint_pair(&mut rng, m, positive_only);
                additivity_failure(p, f, g)
            })?;
            Ok(certify(trials, Some(seed), found))
        }
    }
}

/// `fs` with slot `i` replaced by 0 and slot `j` by `f_i + f_j`.
fn merged(fs: &[ExactTuple], i: usize, j: usize) -> Vec<ExactTuple> {
    let mut out = fs.to_vec();
    out[j] = &fs[i] + &fs[j];
    out[i] = CoordTuple::zeros(fs[i].dim());
    out
}

fn steadiness_failure(
    s: &PowerSumPolynomial<Q>,
    fs: Vec<ExactTuple>,
    i: usize,
    j: usize,
) -> Result<Option<Witness<ExactTuple, ExactTuple>>> {
    let counterpart = merged(&fs, i, j);
    let lhs = s.eval(&fs)?;
    let rhs = s.eval(&counterpart)?;
    Ok((lhs != rhs).then_some(Witness {
        input: fs,
        counterpart,
        lhs,
        rhs,
    }))
}

/// Decides whether merging a disjoint pair of arguments into one slot (and
/// zeroing the other) leaves `S` unchanged.
pub fn is_orthogonally_steady(s: &PowerSumPolynomial<Q>, mode: Mode) -> Result<TupleCertificate> {
    let r = s.vars();
    if r < 2 {
        return Err(Error::Argument(
            "orthogonal steadiness needs at least two variables".into(),
        ));
    }
    let m = s.generator().dim();
    match mode {
        Mode::Exact => {
            // the other slots cancel; fill them with a fixed pattern anyway
            let filler: Vec<ExactTuple> = (2..r)
                .map(|k| CoordTuple::new((0..m).map(|a| Q::from(((k + a) % 5) as i64 - 2)).collect()))
                .collect();
            let grid = DisjointGrid::new(m, s.generator().degree(), false)?;
            let found = first_failure(grid.len(), |code| {
                let (f, g) = grid.pair(code);
                let mut fs = vec![f, g];
                fs.extend(filler.iter().cloned());
                steadiness_failure(s, fs, 0, 1)
            })?;
            Ok(certify(grid.len(), None, found))
        }
        Mode::Sampled { trials, seed } => {
            let found = first_failure(trials, |trial| {
                let mut rng = case_rng(seed, trial as u64);
                let mut fs: Vec<ExactTuple> = (0..r).map(|_| random_values(&mut rng, m, false)).collect();
                let i = rng.gen_range(0..r);
                let j = (i + rng.gen_range(1..r)) % r;
                let (f, g) = random_disjoint_pair(&mut rng, m, false);
                fs[i] = f;
                fs[j] = g;
                steadiness_failure(s, fs, i, j)
            })?;
            Ok(certify(trials, Some(seed), found))
        }
    }
}

/// Checks `P(𝔖(fs)) = Σ P(f_k)` within `tol` (relative to the magnitude of
/// each side), where `𝔖` is the root-power sum of the degree of `P`.
pub fn check_root_power_identity(
    p: &HomogeneousPolynomial<f64>,
    fs: &[RealTuple],
    tol: f64,
) -> Result<bool> {
    let additive = match p {
        HomogeneousPolynomial::Diagonal { .. } => true,
        HomogeneousPolynomial::Generated(t) => t.symmetrize().is_diagonal(),
    };
    if !additive {
        return Err(Error::Precondition(
            "the root-power identity needs an orthogonally additive polynomial".into(),
        ));
    }
    let dim = common_dim(fs)?;
    let degree = p.degree() as u32;
    let root = CoordTuple::new(
        (0..dim)
            .map(|c| root_power(fs.iter().map(|f| f.get(c).powi(degree as i32)).sum(), degree))
            .collect(),
    );
    let lhs = p.eval(&root)?;
    let mut rhs = CoordTuple::zeros(p.codim());
    for f in fs {
        rhs = &rhs + &p.eval(f)?;
    }
    Ok(lhs.approx_eq(&rhs, tol))
}

/// Decides whether `T(fs) = 0` whenever `⋀|f_k| = 0` (or, with
/// `positive_only`, whenever the `f_k >= 0` have `⋀ f_k = 0`).
///
/// The exact mode enumerates every support pattern with empty common
/// intersection, with unit values (signed by a fixed pattern on `E`).
/// Singleton supports isolate each off-diagonal entry, so this decides the
/// property for multilinear `T`.
pub fn joint_orthosymmetry_check(
    t: &MultilinearMap<Q>,
    positive_only: bool,
    mode: Mode,
) -> Result<TupleCertificate> {
    let (n, m) = (t.order(), t.dim());
    let evaluate = |fs: Vec<ExactTuple>| -> Result<Option<Witness<ExactTuple, ExactTuple>>> {
        let value = t.eval(&fs)?;
        Ok((!value.is_zero()).then(|| Witness {
            input: fs,
            counterpart: vec![],
            lhs: value,
            rhs: CoordTuple::zeros(t.codim()),
        }))
    };
    match mode {
        Mode::Exact => {
            if n * m > 16 {
                return Err(Error::Unsupported(format!(
                    "exact joint check needs n*m <= 16, got {}",
                    n * m
                )));
            }
            let full = (1usize << m) - 1;
            let count = 1usize << (n * m);
            let found = first_failure(count, |code| {
                let masks: Vec<usize> = (0..n).map(|k| code >> (k * m) & full).collect();
                if masks.iter().fold(full, |acc, s| acc & s) != 0 {
                    return Ok(None);
                }
                let fs = masks
                    .iter()
                    .enumerate()
                    .map(|(k, &s)| {
                        CoordTuple::new(
                            (0..m)
                                .map(|a| match (s >> a & 1, positive_only || (k + a) % 2 == 0) {
                                    (0, _) => Q::from(0),
                                    (_, true) => Q::from(1),
                                    (_, false) => Q::from(-1),
                                })
                                .collect(),
                        )
                    })
                    .collect();
                evaluate(fs)
            })?;
            Ok(certify(count, None, found))
        }
        Mode::Sampled { trials, seed } => {
            let found = first_failure(trials, |trial| {
                let mut rng = case_rng(seed, trial as u64);
                let mut fs: Vec<Vec<Q>> = vec![Vec::with_capacity(m); n];
                for _ in 0..m {
                    let excluded = rng.gen_range(0..n);
                    for (k, f) in fs.iter_mut().enumerate() {
                        let v = if k == excluded || rng.gen_bool(0.3) {
                            0
                        } else if positive_only {
                            rng.gen_range(1..=3)
                        } else {
                            rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 }
                        };
                        f.push(Q::from(v));
                    }
                }
                evaluate(fs.into_iter().map(CoordTuple::new).collect())
            })?;
            Ok(certify(trials, Some(seed), found))
        }
    }
}

/// `Σ_{k=1}^{n-1} C(n,k) T(f^{n-k} g^k)`, where `f^{n-k} g^k` fills the
/// first `n-k` slots with `f` and the rest with `g`.
pub fn binomial_cross_terms(t: &MultilinearMap<Q>, f: &ExactTuple, g: &ExactTuple) -> Result<ExactTuple> {
    let n = t.order();
    let mut acc = CoordTuple::zeros(t.codim());
    for k in 1..n {
        let mut args = vec![f.clone(); n - k];
        args.extend(std::iter::repeat_n(g.clone(), k));
        let c = Q::from(binomial(n as i64, k as i64));
        acc = &acc + &t.eval(&args)?.scale(&c);
    }
    Ok(acc)
}

/// Checks `P_T(f+g) - P_T(f) - P_T(g) = Σ_{k=1}^{n-1} C(n,k) T(f^{n-k} g^k)`
/// for symmetric `T` on random disjoint `f, g >= 0`.
pub fn check_binomial_identity(
    t: &MultilinearMap<Q>,
    trials: usize,
    seed: u64,
) -> Result<TupleCertificate> {
    if !t.is_symmetric() {
        return Err(Error::Precondition("the binomial expansion needs a symmetric map".into()));
    }
    let p = t.polynomial();
    let found = first_failure(trials, |trial| {
        let mut rng = case_rng(seed, trial as u64);
        let (f, g) = random_disjoint_pair(&mut rng, t.dim(), true);
        let lhs = &(&p.eval(&(&f + &g))? - &p.eval(&f)?) - &p.eval(&g)?;
        let rhs = binomial_cross_terms(t, &f, &g)?;
        Ok((lhs != rhs).then(|| Witness {
            input: vec![f.clone(), g.clone()],
            counterpart: vec![f, g],
            lhs,
            rhs,
        }))
    })?;
    Ok(certify(trials, Some(seed), found))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(c: &[i64]) -> ExactTuple {
        ExactTuple::from_ints(c)
    }

    fn off_diagonal() -> MultilinearMap<Q> {
        // T(f, g) = f(1) g(2)
        MultilinearMap::single(2, 2, &[0, 1], q(&[1])).unwrap()
    }

    #[test]
    fn evaluation_examples() {
        let d = MultilinearMap::diagonal(2, &[q(&[1]), q(&[1])]).unwrap();
        assert_eq!(d.eval(&[q(&[1, 2]), q(&[3, 4])]).unwrap(), q(&[11]));
        assert_eq!(d.eval(&[q(&[0, 0]), q(&[3, 4])]).unwrap(), q(&[0]));
        assert_eq!(off_diagonal().eval(&[q(&[1, 2]), q(&[3, 4])]).unwrap(), q(&[4]));
        assert!(d.eval(&[q(&[1, 2])]).is_err());
        assert!(d.eval(&[q(&[1, 2, 3]), q(&[1, 2, 3])]).is_err());
        assert!(MultilinearMap::<Q>::zeros(5, 2, 1).is_err());
    }

    #[test]
    fn symmetrization() {
        let s = off_diagonal().symmetrize();
        assert_eq!(s.entry(&[0, 1]).unwrap(), &ExactTuple::new(vec![Q::new(1, 2)]));
        assert_eq!(s.entry(&[1, 0]).unwrap(), &ExactTuple::new(vec![Q::new(1, 2)]));
        assert_eq!(s.eval(&[q(&[1, 2]), q(&[3, 4])]).unwrap(), q(&[5]));
        assert!(s.is_symmetric());
        assert!(!off_diagonal().is_symmetric());
        assert_eq!(s.symmetrize(), s);
    }

    #[test]
    fn tensor_json_round_trip() {
        let t = off_diagonal().symmetrize();
        let v = t.to_json();
        assert_eq!(v["entries"].as_array().unwrap().len(), 2);
        assert_eq!(MultilinearMap::<Q>::from_json(&v).unwrap(), t);
        assert!(MultilinearMap::<Q>::from_json(&json!({"order": 2})).is_err());
    }

    #[test]
    fn orthosymmetry_examples() {
        let d = MultilinearMap::diagonal(2, &[q(&[2]), q(&[-1])]).unwrap();
        assert!(is_orthosymmetric(&d, Mode::Exact).unwrap().passed);
        let c = is_orthosymmetric(&off_diagonal(), Mode::Exact).unwrap();
        let w = c.witness.as_ref().unwrap();
        assert_eq!(w.input, vec![q(&[1, 0]), q(&[0, 1])]);
        assert_eq!(w.lhs, q(&[1]));
        assert!(c
            .replay(|x| off_diagonal().eval(x), |_| Ok(q(&[0])), |a, b| a == b)
            .unwrap());
        let d3 = MultilinearMap::diagonal(3, &[q(&[1]), q(&[2]), q(&[3])]).unwrap();
        assert!(is_orthosymmetric(&d3, Mode::Exact).unwrap().passed);
        let sampled = is_orthosymmetric(&off_diagonal(), Mode::Sampled { trials: 200, seed: 1 }).unwrap();
        assert!(!sampled.passed);
    }

    /// Brute force over every disjoint-support integer tuple with
    /// coordinates in [-2, 2].
    fn orthosymmetric_by_brute_force(t: &MultilinearMap<Q>) -> bool {
        let (n, m) = (t.order(), t.dim());
        let points: Vec<ExactTuple> = (0..5usize.pow(m as u32))
            .map(|mut code| {
                CoordTuple::new(
                    (0..m)
                        .map(|_| {
                            let v = Q::from((code % 5) as i64 - 2);
                            code /= 5;
                            v
                        })
                        .collect(),
                )
            })
            .collect();
        (0..n)
            .map(|_| points.iter())
            .multi_cartesian_product()
            .filter(|fs| {
                (0..n).tuple_combinations().any(|(i, j)| {
                    crate::vector::disjoint(fs[i], fs[j]).unwrap()
                })
            })
            .all(|fs| {
                let fs: Vec<ExactTuple> = fs.into_iter().cloned().collect();
                t.eval(&fs).unwrap().is_zero()
            })
    }

    #[test]
    fn diagonality_matches_brute_force() {
        let mut rng = case_rng(11, 0);
        for (n, m) in [(2, 2), (2, 3), (3, 2)] {
            for trial in 0..6 {
                let t = if trial % 2 == 0 {
                    let w: Vec<ExactTuple> = (0..m).map(|_| random_values(&mut rng, 1, false)).collect();
                    MultilinearMap::diagonal(n, &w).unwrap()
                } else {
                    MultilinearMap::random(n, m, 1, 0.3, &mut rng).unwrap()
                };
                assert_eq!(t.is_diagonal(), orthosymmetric_by_brute_force(&t), "{t:?}");
            }
        }
    }

    #[test]
    fn additivity_examples() {
        let squares = HomogeneousPolynomial::diagonal(2, vec![q(&[1]), q(&[1])]).unwrap();
        let sum_squared =
            MultilinearMap::from_entries(2, 2, 1, (0..2).cartesian_product(0..2).map(|(i, j)| (vec![i, j], q(&[1]))))
                .unwrap()
                .polynomial();
        for positive in [false, true] {
            assert!(is_orthogonally_additive(&squares, positive, Mode::Exact).unwrap().passed);
            let c = is_orthogonally_additive(&sum_squared, positive, Mode::Exact).unwrap();
            assert!(!c.passed);
        }
        let c = is_orthogonally_additive(&sum_squared, true, Mode::Sampled { trials: 200, seed: 2 }).unwrap();
        assert!(!c.passed);
        assert_eq!(sum_squared.eval(&q(&[1, 1])).unwrap(), q(&[4]));
        assert_eq!(
            &sum_squared.eval(&q(&[1, 0])).unwrap() + &sum_squared.eval(&q(&[0, 1])).unwrap(),
            q(&[2])
        );
    }

    #[test]
    fn steadiness_examples() {
        let squares = HomogeneousPolynomial::diagonal(2, vec![q(&[1]), q(&[1])]).unwrap();
        let s = PowerSumPolynomial::new(2, squares.clone()).unwrap();
        assert!(is_orthogonally_steady(&s, Mode::Exact).unwrap().passed);
        let sum_squared = MultilinearMap::from_entries(
            2,
            2,
            1,
            (0..2).cartesian_product(0..2).map(|(i, j)| (vec![i, j], q(&[1]))),
        )
        .unwrap()
        .polynomial();
        let bad = PowerSumPolynomial::new(2, sum_squared).unwrap();
        assert!(!is_orthogonally_steady(&bad, Mode::Exact).unwrap().passed);
        assert!(!is_orthogonally_steady(&bad, Mode::Sampled { trials: 200, seed: 3 }).unwrap().passed);
        let one = PowerSumPolynomial::new(1, squares).unwrap();
        assert!(matches!(is_orthogonally_steady(&one, Mode::Exact), Err(Error::Argument(_))));
    }

    #[test]
    fn root_power_examples() {
        let r = |c: &[f64]| RealTuple::new(c.to_vec());
        let p2 = HomogeneousPolynomial::diagonal(2, vec![r(&[1.0]), r(&[1.0])]).unwrap();
        assert!(check_root_power_identity(&p2, &[r(&[3.0, 0.0]), r(&[0.0, 4.0])], 1e-9).unwrap());
        assert!(check_root_power_identity(&p2, &[r(&[1.0, 1.0]), r(&[2.0, 2.0])], 1e-9).unwrap());
        let p3 = HomogeneousPolynomial::diagonal(3, vec![r(&[1.0]), r(&[1.0])]).unwrap();
        assert!(check_root_power_identity(&p3, &[r(&[-1.0, 2.0]), r(&[2.0, 1.0])], 1e-9).unwrap());
        let bad = MultilinearMap::single(2, 2, &[0, 1], r(&[1.0])).unwrap().polynomial();
        assert!(matches!(
            check_root_power_identity(&bad, &[r(&[1.0, 1.0])], 1e-9),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn joint_orthosymmetry_examples() {
        let d3 = MultilinearMap::diagonal(3, &[q(&[1]), q(&[1]), q(&[1])]).unwrap();
        assert_eq!(d3.eval(&[q(&[1, 0, 2]), q(&[2, 0, 1]), q(&[0, 3, 0])]).unwrap(), q(&[0]));
        for positive in [false, true] {
            assert!(joint_orthosymmetry_check(&d3, positive, Mode::Exact).unwrap().passed);
            assert!(!joint_orthosymmetry_check(&off_diagonal(), positive, Mode::Exact).unwrap().passed);
        }
        let c = joint_orthosymmetry_check(&off_diagonal(), true, Mode::Sampled { trials: 100, seed: 4 }).unwrap();
        assert!(!c.passed);
    }

    #[test]
    fn binomial_identity_on_random_symmetric_maps() {
        let mut rng = case_rng(5, 0);
        for n in 2..=3 {
            let t = MultilinearMap::random(n, 3, 2, 0.5, &mut rng).unwrap().symmetrize();
            assert!(check_binomial_identity(&t, 100, 9).unwrap().passed);
        }
        assert!(matches!(
            check_binomial_identity(&off_diagonal(), 10, 1),
            Err(Error::Precondition(_))
        ));
    }
}
