//! The "greater on the right" order on perturbation functions and its
//! consequences for CDFs, quantiles and expectations of monotone
//! functions.

use std::sync::Arc;

use crate::bases::SymmetricBase;
use crate::error::{Error, Result};
use crate::numerics::Interval;
use crate::perturb::PerturbationFn;
use crate::real::{lit, to_f64, Real};
use crate::skew1d::SkewDensity1D;

/// Gap above which `G₂(x) > G₁(x)` counts as strict, and below which a
/// negative gap is treated as a tie.
pub const STRICT_GAP: f64 = 1e-9;
/// Grid size of the order checks.
pub const ORDER_GRID: usize = 201;
/// Allowed `F₂ − F₁` excess in the stochastic order check.
pub const CDF_TOL: f64 = 1e-9;
/// Allowed `Q₁ − Q₂` excess in the quantile order check.
pub const QUANTILE_TOL: f64 = 1e-7;
/// Allowed `E₁ − E₂` excess in the functional order check.
pub const EXPECTATION_TOL: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    /// `G₂ ≥ G₁` on the right, strictly somewhere.
    G2GrG1,
    G1GrG2,
    Equal,
    Incomparable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OrderVerdict {
    pub relation: Relation,
    /// Point of largest gap for a strict relation; a point on each side
    /// of a crossing for an incomparable pair.
    pub witnesses: Vec<f64>,
    pub strict: bool,
    /// `max (G₂ − G₁)` and `min (G₂ − G₁)` over the positive grid.
    pub max_gap: f64,
    pub min_gap: f64,
    /// Whether the mirrored check `G₂(−x) ≤ G₁(−x)` tells the same story.
    pub consistent: bool,
}

/// `n` positive points spaced by quantiles of `base` over its central
/// 99.99% mass.
pub fn default_grid<T: Real>(base: &SymmetricBase<T>, n: usize) -> Vec<T> {
    let half: T = lit(0.5);
    let span: T = lit(0.49995);
    (1..=n)
        .map(|i| {
            let p = half + span * lit::<T>(i as f64) / lit(n as f64);
            base.quantile(p).expect("p inside (0, 1)")
        })
        .collect()
}

/// Compares `G₁` and `G₂` on the positive part of a uniform `n`-point grid
/// over `iv`.
pub fn compare_gr<T: Real>(g1: &PerturbationFn<T>, g2: &PerturbationFn<T>, iv: Interval<T>, n: usize) -> OrderVerdict {
    let pts: Vec<T> = iv.grid(n.max(2)).into_iter().filter(|&x| x > T::zero()).collect();
    compare_gr_points(g1, g2, &pts)
}

/// Compares on explicit positive points.
pub fn compare_gr_points<T: Real>(g1: &PerturbationFn<T>, g2: &PerturbationFn<T>, pts: &[T]) -> OrderVerdict {
    let mut max_gap = (f64::NEG_INFINITY, 0.0);
    let mut min_gap = (f64::INFINITY, 0.0);
    let mut mirror = 0.0f64;
    for &x in pts.iter().filter(|&&x| x > T::zero()) {
        let d = to_f64(g2.eval(x) - g1.eval(x));
        let dm = to_f64(g1.eval(-x) - g2.eval(-x));
        mirror = mirror.max((d - dm).abs());
        let xf = to_f64(x);
        if d > max_gap.0 {
            max_gap = (d, xf);
        }
        if d < min_gap.0 {
            min_gap = (d, xf);
        }
    }
    if max_gap.0 == f64::NEG_INFINITY {
        max_gap.0 = 0.0;
        min_gap.0 = 0.0;
    }
    let up = max_gap.0 > STRICT_GAP;
    let down = min_gap.0 < -STRICT_GAP;
    let (relation, witnesses) = match (up, down) {
        (false, false) => (Relation::Equal, Vec::new()),
        (true, false) => (Relation::G2GrG1, vec![max_gap.1]),
        (false, true) => (Relation::G1GrG2, vec![min_gap.1]),
        (true, true) => (Relation::Incomparable, vec![max_gap.1, min_gap.1]),
    };
    OrderVerdict {
        relation,
        witnesses,
        strict: up != down,
        max_gap: max_gap.0,
        min_gap: min_gap.0,
        consistent: mirror <= STRICT_GAP,
    }
}

fn require_premise<T: Real>(f0: &SymmetricBase<T>, g1: &PerturbationFn<T>, g2: &PerturbationFn<T>) -> Result<OrderVerdict> {
    let v = compare_gr_points(g1, g2, &default_grid(f0, ORDER_GRID));
    match v.relation {
        Relation::G2GrG1 | Relation::Equal => Ok(v),
        r => Err(Error::PremiseNotMet(format!(
            "G2 is not greater on the right than G1 (relation {r:?}, gap range [{:.3e}, {:.3e}])",
            v.min_gap, v.max_gap
        ))),
    }
}

fn laws<T: Real>(f0: &SymmetricBase<T>, g1: &PerturbationFn<T>, g2: &PerturbationFn<T>) -> Result<(SkewDensity1D<T>, SkewDensity1D<T>)> {
    Ok((SkewDensity1D::new(*f0, g1.clone())?, SkewDensity1D::new(*f0, g2.clone())?))
}

#[derive(Debug, Clone, PartialEq)]
pub struct StochasticOrderReport {
    pub order: OrderVerdict,
    pub points: Vec<f64>,
    pub f1: Vec<f64>,
    pub f2: Vec<f64>,
    /// `max (F₂ − F₁)⁺` over the points.
    pub max_violation: f64,
    pub witness: Option<f64>,
    pub pass: bool,
}

/// Checks `F₁ ≥ F₂` on a 201-point grid over the base's central mass.
pub fn verify_stochastic_order<T: Real>(f0: &SymmetricBase<T>, g1: &PerturbationFn<T>, g2: &PerturbationFn<T>) -> Result<StochasticOrderReport> {
    let half = default_grid(f0, ORDER_GRID / 2);
    let mut pts: Vec<T> = half.iter().rev().map(|&x| -x).collect();
    pts.push(T::zero());
    pts.extend(half);
    stochastic_order_on(f0, g1, g2, &pts)
}

/// As [`verify_stochastic_order`] on caller-chosen points.
pub fn stochastic_order_on<T: Real>(
    f0: &SymmetricBase<T>,
    g1: &PerturbationFn<T>,
    g2: &PerturbationFn<T>,
    pts: &[T],
) -> Result<StochasticOrderReport> {
    let order = require_premise(f0, g1, g2)?;
    let (d1, d2) = laws(f0, g1, g2)?;
    let f1 = d1.cdf_many(pts)?;
    let f2 = d2.cdf_many(pts)?;
    let mut worst = (0.0, None);
    for ((x, a), b) in pts.iter().zip(&f1).zip(&f2) {
        let v = to_f64(*b - *a);
        if v > worst.0 {
            worst = (v, Some(to_f64(*x)));
        }
    }
    let pass = worst.0 <= CDF_TOL;
    Ok(StochasticOrderReport {
        order,
        points: pts.iter().map(|&x| to_f64(x)).collect(),
        f1: f1.into_iter().map(to_f64).collect(),
        f2: f2.into_iter().map(to_f64).collect(),
        max_violation: worst.0,
        witness: if pass { None } else { worst.1 },
        pass,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuantileOrderReport {
    pub ps: Vec<f64>,
    pub q1: Vec<f64>,
    pub q2: Vec<f64>,
    pub pass: bool,
    /// Some `p` with `Q₂(p) − Q₁(p) > 1e-7`.
    pub strict_gap: bool,
}

/// Checks `Q₁(p) ≤ Q₂(p) + 1e-7` for each requested `p`.
pub fn quantile_order<T: Real>(f0: &SymmetricBase<T>, g1: &PerturbationFn<T>, g2: &PerturbationFn<T>, ps: &[T]) -> Result<QuantileOrderReport> {
    require_premise(f0, g1, g2)?;
    let (d1, d2) = laws(f0, g1, g2)?;
    let mut q1 = Vec::with_capacity(ps.len());
    let mut q2 = Vec::with_capacity(ps.len());
    for &p in ps {
        q1.push(to_f64(d1.quantile(p)?));
        q2.push(to_f64(d2.quantile(p)?));
    }
    let pass = q1.iter().zip(&q2).all(|(a, b)| *a <= *b + QUANTILE_TOL);
    let strict_gap = q1.iter().zip(&q2).any(|(a, b)| *b - *a > QUANTILE_TOL);
    Ok(QuantileOrderReport {
        ps: ps.iter().map(|&p| to_f64(p)).collect(),
        q1,
        q2,
        pass,
        strict_gap,
    })
}

/// A nondecreasing test function `t` with `|t(x)| = O(|x|^growth)`.
#[derive(Clone)]
pub struct TestFunction<T> {
    pub name: String,
    pub growth: f64,
    f: Arc<dyn Fn(T) -> T + Send + Sync>,
}

impl<T: Real> TestFunction<T> {
    pub fn new<F: Fn(T) -> T + Send + Sync + 'static>(name: &str, growth: f64, f: F) -> Self {
        Self {
            name: name.into(),
            growth,
            f: Arc::new(f),
        }
    }

    /// `x^k` for odd `k`.
    pub fn odd_power(k: u32) -> Self {
        Self::new(&format!("x^{k}"), k as f64, move |x: T| x.powi(k as i32))
    }

    pub fn eval(&self, x: T) -> T {
        (self.f)(x)
    }
}

impl<T> std::fmt::Debug for TestFunction<T> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TestFunction")
            .field("name", &self.name)
            .field("growth", &self.growth)
            .finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FunctionalOrderReport {
    pub e1: f64,
    pub e2: f64,
    pub pass: bool,
}

/// `E t(X₁)` and `E t(X₂)` with the check `E₁ ≤ E₂ + 1e-7`.
pub fn functional_order<T: Real>(
    f0: &SymmetricBase<T>,
    g1: &PerturbationFn<T>,
    g2: &PerturbationFn<T>,
    t: &TestFunction<T>,
) -> Result<FunctionalOrderReport> {
    if !f0.has_moment(lit(t.growth)) {
        return Err(Error::MomentUndefined {
            order: t.growth.ceil() as u32,
            reason: format!("E {} is not finite under base {}", t.name, f0.name()),
        });
    }
    require_premise(f0, g1, g2)?;
    let (d1, d2) = laws(f0, g1, g2)?;
    let e1 = to_f64(d1.expectation(|x| t.eval(x))?);
    let e2 = to_f64(d2.expectation(|x| t.eval(x))?);
    Ok(FunctionalOrderReport {
        e1,
        e2,
        pass: e1 <= e2 + EXPECTATION_TOL,
    })
}

/// Odd moments `E X₀^{2n−1} ≤ E X₁^{2n−1} ≤ E X*^{2n−1}` for the base,
/// the law perturbed by `g1` and the half-law.
pub fn odd_moment_chain<T: Real>(f0: &SymmetricBase<T>, g1: &PerturbationFn<T>, n: u32) -> Result<[f64; 3]> {
    let k = 2 * n - 1;
    let t = TestFunction::odd_power(k);
    let lower = functional_order(f0, &PerturbationFn::null(), g1, &t)?;
    let upper = functional_order(f0, g1, &PerturbationFn::half_line(), &t)?;
    Ok([lower.e1, lower.e2, upper.e2])
}
