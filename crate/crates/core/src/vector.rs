//! Positively homogeneous functional calculus on ℝ^m.
//!
//! On ℝ^m every nonzero real lattice homomorphism is a positive multiple
//! of a coordinate evaluation, so `h(f_1, ..., f_n)` is computed
//! coordinatewise: `c ↦ h(f_1(c), ..., f_n(c))`. Continuity of a
//! user-supplied `h` is taken on trust; homogeneity can be sample-checked
//! with [`check_homogeneity`].

use std::fmt;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::orderization::total_orderization;
use crate::pointwise::Pointwise;
use crate::rng::case_rng;
use crate::scalar::{Scalar, Q};
use crate::tuple::{common_dim, CoordTuple, ExactTuple, RealTuple};

type Evaluator = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A function ℝⁿ → ℝ, intended to satisfy `h(λx) = λh(x)` for `λ >= 0`.
#[derive(Clone)]
pub struct PHFunction {
    name: String,
    arity: usize,
    symmetric: bool,
    eval: Evaluator,
}

impl fmt::Debug for PHFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PHFunction")
            .field("name", &self.name)
            .field("arity", &self.arity)
            .field("symmetric", &self.symmetric)
            .finish()
    }
}

impl PHFunction {
    /// Wraps an arbitrary evaluator; `symmetric` is a claim, not checked.
    pub fn new(
        name: impl Into<String>,
        arity: usize,
        symmetric: bool,
        eval: impl Fn(&[f64]) -> f64 + Send + Sync + 'static,
    ) -> Self {
        PHFunction {
            name: name.into(),
            arity,
            symmetric,
            eval: Arc::new(eval),
        }
    }

    pub fn sum(arity: usize) -> Self {
        Self::new("sum", arity, true, |x| x.iter().sum())
    }

    pub fn min(arity: usize) -> Self {
        Self::new("min", arity, true, |x| x.iter().copied().fold(f64::INFINITY, f64::min))
    }

    pub fn max(arity: usize) -> Self {
        Self::new("max", arity, true, |x| {
            x.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        })
    }

    /// `(∏|x_k|)^(1/n)`.
    pub fn geometric_mean(arity: usize) -> Self {
        let n = arity as f64;
        Self::new("geometric-mean", arity, true, move |x| {
            x.iter().map(|v| v.abs()).product::<f64>().powf(1.0 / n)
        })
    }

    /// `(Σ x_k^degree)^(1/degree)` over `arity` arguments; the root is the
    /// signed real root when `degree` is odd.
    pub fn root_power_sum(arity: usize, degree: u32) -> Self {
        Self::new(format!("root-power-sum-{degree}"), arity, true, move |x| {
            root_power(x.iter().map(|v| v.powi(degree as i32)).sum(), degree)
        })
    }

    /// `x ↦ x_i` (0-based); not symmetric for `arity >= 2`.
    pub fn projection(arity: usize, i: usize) -> Self {
        assert!(i < arity, "projection index out of range");
        Self::new(format!("projection-{}", i + 1), arity, arity == 1, move |x| x[i])
    }

    /// `x ↦ x_1²`: a fixture that is not positively homogeneous.
    pub fn first_squared(arity: usize) -> Self {
        Self::new("first-squared", arity, arity == 1, |x| x[0] * x[0])
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn claims_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn call(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.arity {
            return Err(Error::Argument(format!(
                "{} takes {} arguments, got {}",
                self.name,
                self.arity,
                x.len()
            )));
        }
        Ok((self.eval)(x))
    }
}

/// Real `degree`-th root; odd degrees keep the sign.
pub fn root_power(s: f64, degree: u32) -> f64 {
    let d = degree as f64;
    if degree % 2 == 1 {
        s.signum() * s.abs().powf(1.0 / d)
    } else {
        s.powf(1.0 / d)
    }
}

/// Coordinatewise application of `h` to `fs`.
pub fn apply_ph(h: &PHFunction, fs: &[RealTuple]) -> Result<RealTuple> {
    if fs.len() != h.arity {
        return Err(Error::Argument(format!(
            "{} takes {} tuples, got {}",
            h.name,
            h.arity,
            fs.len()
        )));
    }
    let dim = common_dim(fs)?;
    let mut fiber = vec![0.0; fs.len()];
    let coords = (0..dim)
        .map(|c| {
            for (slot, f) in fiber.iter_mut().zip(fs) {
                *slot = *f.get(c);
            }
            (h.eval)(&fiber)
        })
        .collect();
    Ok(CoordTuple::new(coords))
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneityViolation {
    pub x: Vec<f64>,
    pub lambda: f64,
    /// `h(λx)`
    pub scaled: f64,
    /// `λh(x)`
    pub expected: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HomogeneityReport {
    pub passed: bool,
    pub trials: usize,
    pub violation: Option<HomogeneityViolation>,
}

/// Samples `x` and `λ ∈ [0, 8]` and checks `|h(λx) - λh(x)| <= tol(1 + |h(x)|)`.
/// Unit vectors with `λ = 2` are probed before the random trials.
pub fn check_homogeneity(
    h: &PHFunction,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<HomogeneityReport> {
    if tol <= 0.0 || tol.is_nan() {
        return Err(Error::Argument(format!("tolerance must be positive, got {tol}")));
    }
    let n = h.arity;
    let probes = (0..n).map(|i| {
        let mut x = vec![0.0; n];
        x[i] = 1.0;
        (x, 2.0)
    });
    let mut rng = case_rng(seed, 0);
    let random: Vec<(Vec<f64>, f64)> = (0..trials)
        .map(|_| {
            let x = (0..n).map(|_| rng.gen_range(-5.0..5.0)).collect();
            (x, rng.gen_range(0.0..=8.0))
        })
        .collect();
    let mut count = 0;
    for (x, lambda) in probes.chain(random) {
        count += 1;
        let hx = h.call(&x)?;
        let scaled_x: Vec<f64> = x.iter().map(|v| lambda * v).collect();
        let scaled = h.call(&scaled_x)?;
        let expected = lambda * hx;
        if (scaled - expected).abs() > tol * (1.0 + hx.abs()) || scaled.is_nan() {
            return Ok(HomogeneityReport {
                passed: false,
                trials: count,
                violation: Some(HomogeneityViolation {
                    x,
                    lambda,
                    scaled,
                    expected,
                }),
            });
        }
    }
    Ok(HomogeneityReport {
        passed: true,
        trials: count,
        violation: None,
    })
}

/// Grid for the infimum in `f ⊠ g = ½ inf_θ (θf + θ⁻¹g)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaGrid {
    pub points: usize,
    /// θ ranges over `[2^min_exp, 2^max_exp]`.
    pub min_exp: f64,
    pub max_exp: f64,
    /// Golden-section steps around the best grid point.
    pub refine_steps: usize,
}

impl Default for ThetaGrid {
    fn default() -> Self {
        ThetaGrid {
            points: 4096,
            min_exp: -20.0,
            max_exp: 20.0,
            refine_steps: 60,
        }
    }
}

fn boxtimes_scalar(a: f64, b: f64, grid: &ThetaGrid) -> f64 {
    // With a zero factor the infimum is approached only as θ → 0 or ∞.
    if a == 0.0 || b == 0.0 {
        return 0.0;
    }
    let objective = |log_theta: f64| {
        let t = log_theta.exp2();
        a * t + b / t
    };
    let step = (grid.max_exp - grid.min_exp) / (grid.points.max(2) - 1) as f64;
    let at = |i: usize| grid.min_exp + step * i as f64;
    let best = (0..grid.points.max(2))
        .min_by(|&i, &j| objective(at(i)).total_cmp(&objective(at(j))))
        .expect("grid is nonempty");
    // unimodal in log θ: refine inside the neighbouring grid cells
    let mut lo = at(best.saturating_sub(1));
    let mut hi = at((best + 1).min(grid.points.max(2) - 1));
    let ratio = (5f64.sqrt() - 1.0) / 2.0;
    let mut x1 = hi - ratio * (hi - lo);
    let mut x2 = lo + ratio * (hi - lo);
    let (mut f1, mut f2) = (objective(x1), objective(x2));
    for _ in 0..grid.refine_steps {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = objective(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = objective(x2);
        }
    }
    0.5 * objective(at(best)).min(f1).min(f2)
}

/// `f ⊠ g` on nonnegative tuples, by numeric minimization over θ.
pub fn boxtimes_inf(f: &RealTuple, g: &RealTuple, grid: &ThetaGrid) -> Result<RealTuple> {
    common_dim(&[f.clone(), g.clone()])?;
    if !f.is_nonneg() || !g.is_nonneg() {
        return Err(Error::Domain("⊠ is defined on nonnegative tuples".into()));
    }
    Ok(CoordTuple::new(
        f.coords()
            .iter()
            .zip(g.coords())
            .map(|(&a, &b)| boxtimes_scalar(a, b, grid))
            .collect(),
    ))
}

/// `|f| ∧ |g| = 0`.
pub fn disjoint<S: Scalar>(f: &CoordTuple<S>, g: &CoordTuple<S>) -> Result<bool> {
    if f.dim() != g.dim() {
        return Err(Error::Argument(format!(
            "dimension mismatch: {} vs {}",
            f.dim(),
            g.dim()
        )));
    }
    Ok(f.abs().meet(&g.abs()).is_zero())
}

fn orderize_exact(fs: &[ExactTuple]) -> Result<Vec<ExactTuple>> {
    let dim = common_dim(fs)?;
    Ok(total_orderization(&Pointwise::<Q>::new(dim), fs)?.into_vec())
}

/// `Σ f_k = Σ M_k(fs)`, exactly.
pub fn sum_invariance_check(fs: &[ExactTuple]) -> Result<bool> {
    let to = orderize_exact(fs)?;
    let total = |xs: &[ExactTuple]| {
        xs[1..].iter().fold(xs[0].clone(), |acc, x| &acc + x)
    };
    Ok(total(fs) == total(&to))
}

/// `∏ f_k = ∏ M_k(fs)` under the coordinatewise product, exactly.
pub fn product_invariance_check(fs: &[ExactTuple]) -> Result<bool> {
    let to = orderize_exact(fs)?;
    let product = |xs: &[ExactTuple]| {
        xs[1..].iter().fold(xs[0].clone(), |acc, x| acc.hadamard(x))
    };
    Ok(product(fs) == product(&to))
}

/// Whether `apply_ph(h, fs)` and `apply_ph(h, to(fs))` agree within `tol`.
pub fn funcal_toi_holds(h: &PHFunction, fs: &[RealTuple], tol: f64) -> Result<bool> {
    let lhs = apply_ph(h, fs)?;
    let to = crate::orderization::total_orderization_pointwise(fs)?;
    let rhs = apply_ph(h, &to)?;
    Ok(lhs.approx_eq(&rhs, tol))
}

/// Whether `apply_ph(h, ·)` is invariant under every permutation of `fs`.
pub fn funcal_symmetric_on(h: &PHFunction, fs: &[RealTuple], tol: f64) -> Result<bool> {
    use itertools::Itertools;
    let base = apply_ph(h, fs)?;
    for perm in (0..fs.len()).permutations(fs.len()) {
        let permuted: Vec<RealTuple> = perm.iter().map(|&i| fs[i].clone()).collect();
        if !apply_ph(h, &permuted)?.approx_eq(&base, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Symmetry of `h` itself at the point `x`.
pub fn scalar_symmetric_at(h: &PHFunction, x: &[f64], tol: f64) -> Result<bool> {
    let fs: Vec<RealTuple> = x.iter().map(|&v| CoordTuple::new(vec![v])).collect();
    funcal_symmetric_on(h, &fs, tol)
}
