//! Numerical verifiers for concavity-type properties of densities on `ℝᵈ`,
//! `d ≤ 3`, together with the composition rules and the marginalization law
//! for s-concavity.
//!
//! A function is s-concave when
//! `f(θx + (1−θ)y) ≥ {θ f(x)ˢ + (1−θ) f(y)ˢ}^{1/s}`; `s = 0` is read as
//! log-concavity and `s = −∞` as quasi-concavity.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::numerics::{integrate_box, Interval, QuadSpec};
use crate::real::{lit, to_f64, Real};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ConcavityProperty {
    Concave,
    LogConcave,
    SConcave(f64),
    QuasiConcave,
}

impl ConcavityProperty {
    /// Maps an exponent to its named special case.
    pub fn from_s(s: f64) -> Self {
        if s == 1.0 {
            Self::Concave
        } else if s == 0.0 {
            Self::LogConcave
        } else if s == f64::NEG_INFINITY {
            Self::QuasiConcave
        } else {
            Self::SConcave(s)
        }
    }

    pub fn s(&self) -> f64 {
        match *self {
            Self::Concave => 1.0,
            Self::LogConcave => 0.0,
            Self::SConcave(s) => s,
            Self::QuasiConcave => f64::NEG_INFINITY,
        }
    }

    pub fn label(&self) -> String {
        match *self {
            Self::Concave => "concave".into(),
            Self::LogConcave => "log_concave".into(),
            Self::SConcave(s) => format!("s_concave({s})"),
            Self::QuasiConcave => "quasi_concave".into(),
        }
    }
}

/// Settings of the randomized pair test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairConfig {
    pub n_pairs: usize,
    pub seed: u64,
    /// Absolute slack allowed in the defining inequality.
    pub slack: f64,
    /// Threshold on the curvature-normalized log slack for "strict".
    pub strict_tol: f64,
}

impl Default for PairConfig {
    fn default() -> Self {
        Self {
            n_pairs: 10_000,
            seed: 0,
            slack: 1e-9,
            strict_tol: 1e-6,
        }
    }
}

/// Points `x`, `y`, weight `θ` and the two sides of the violated inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub x: Vec<f64>,
    pub y: Vec<f64>,
    pub theta: f64,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConcavityReport {
    pub property: ConcavityProperty,
    pub pass: bool,
    pub strict_observed: bool,
    pub witness: Option<Witness>,
    /// Smallest `lhs − rhs` over all pairs and weights.
    pub min_slack: f64,
    pub n_pairs: usize,
    pub seed: u64,
    pub domain: Vec<(f64, f64)>,
}

impl ConcavityReport {
    /// Re-evaluates the recorded witness; true when it still violates.
    pub fn witness_holds<T: Real, F: Fn(&[T]) -> T>(&self, f: &F, slack: f64) -> bool {
        let Some(w) = &self.witness else { return false };
        let x: Vec<T> = w.x.iter().map(|&v| lit(v)).collect();
        let y: Vec<T> = w.y.iter().map(|&v| lit(v)).collect();
        let theta: T = lit(w.theta);
        let mid = combine(&x, &y, theta);
        let (_, violated) = inequality(f(&mid), f(&x), f(&y), theta, self.property.s(), lit(slack));
        violated
    }
}

/// `θx + (1−θ)y`.
fn combine<T: Real>(x: &[T], y: &[T], theta: T) -> Vec<T> {
    x.iter().zip(y).map(|(&a, &b)| theta * a + (T::one() - theta) * b).collect()
}

/// Right-hand side of the s-mean inequality. A pair with a zero endpoint
/// only requires a nonnegative midpoint (`0ˢ = +∞` for `s < 0`, and the
/// inequality is imposed on the support only for `s ≥ 0`). For `s = 1`
/// signed values are allowed so that convexity can be tested on `−f`.
fn s_mean<T: Real>(a: T, b: T, theta: T, s: f64) -> T {
    let z = T::zero();
    let one = T::one();
    if s == 1.0 && !(a == z || b == z) {
        return theta * a + (one - theta) * b;
    }
    if s == f64::NEG_INFINITY || a <= z || b <= z {
        return a.min(b);
    }
    if s == 0.0 {
        return (theta * a.ln() + (one - theta) * b.ln()).exp();
    }
    let st: T = lit(s);
    (theta * a.powf(st) + (one - theta) * b.powf(st)).powf(st.recip())
}

/// Returns `(rhs, violated)`; non-finite values count as violations.
fn inequality<T: Real>(mid: T, a: T, b: T, theta: T, s: f64, slack: T) -> (T, bool) {
    let rhs = s_mean(a, b, theta, s);
    let bad = !(mid.is_finite() && a.is_finite() && b.is_finite()) || mid < rhs - slack;
    (rhs, bad)
}

pub const THETAS: [f64; 9] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9];

fn bounded_box<T: Real>(domain: &[Interval<T>]) -> Result<()> {
    if domain.is_empty() || domain.len() > 3 {
        return Err(Error::BadParam(format!("domain dimension {} not in 1..=3", domain.len())));
    }
    if let Some(iv) = domain.iter().find(|iv| !iv.is_bounded()) {
        return Err(Error::BadParam(format!("unbounded domain side [{}, {}]", iv.lo(), iv.hi())));
    }
    Ok(())
}

/// Draws `n` pairs uniformly from the box with a fixed seed.
fn draw_pairs<T: Real>(domain: &[Interval<T>], n: usize, seed: u64) -> Vec<(Vec<T>, Vec<T>)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let point = |rng: &mut ChaCha8Rng| -> Vec<T> { domain.iter().map(|iv| iv.lo() + (iv.hi() - iv.lo()) * lit(rng.gen::<f64>())).collect() };
    (0..n)
        .map(|_| {
            let x = point(&mut rng);
            let y = point(&mut rng);
            (x, y)
        })
        .collect()
}

struct PairOutcome {
    violation: Option<Witness>,
    min_slack: f64,
    min_strict: f64,
}

/// Tests s-concavity of `f` on `n_pairs` random pairs of the box times the
/// weights `θ ∈ {0.1, …, 0.9}`. The witness is the violation with the lowest
/// pair index, so the verdict does not depend on scheduling.
pub fn check_sconcave<T, F>(f: &F, s: f64, domain: &[Interval<T>], cfg: &PairConfig) -> Result<ConcavityReport>
where
    T: Real,
    F: Fn(&[T]) -> T + Sync + ?Sized,
{
    bounded_box(domain)?;
    if s.is_nan() || s == f64::INFINITY {
        return Err(Error::BadParam(format!("exponent s = {s}")));
    }
    let pairs = draw_pairs(domain, cfg.n_pairs, cfg.seed);
    let slack: T = lit(cfg.slack);
    let outcomes: Vec<PairOutcome> = pairs
        .par_iter()
        .map(|(x, y)| {
            let (a, b) = (f(x), f(y));
            let dist2: T = x.iter().zip(y).map(|(&p, &q)| (p - q) * (p - q)).sum();
            let mut out = PairOutcome {
                violation: None,
                min_slack: f64::INFINITY,
                min_strict: f64::INFINITY,
            };
            for &th in &THETAS {
                let theta: T = lit(th);
                let mid = f(&combine(x, y, theta));
                let (rhs, bad) = inequality(mid, a, b, theta, s, slack);
                out.min_slack = out.min_slack.min(to_f64(mid - rhs));
                if bad && out.violation.is_none() {
                    out.violation = Some(Witness {
                        x: x.iter().map(|&v| to_f64(v)).collect(),
                        y: y.iter().map(|&v| to_f64(v)).collect(),
                        theta: th,
                        lhs: to_f64(mid),
                        rhs: to_f64(rhs),
                    });
                }
                let curv = theta * (T::one() - theta) * dist2;
                if mid > T::zero() && rhs > T::zero() && curv > T::zero() {
                    let r = to_f64((mid / rhs).ln() / curv);
                    if r.is_finite() {
                        out.min_strict = out.min_strict.min(r);
                    }
                }
            }
            out
        })
        .collect();
    let witness = outcomes.iter().find_map(|o| o.violation.clone());
    let min_slack = outcomes.iter().map(|o| o.min_slack).fold(f64::INFINITY, f64::min);
    let min_strict = outcomes.iter().map(|o| o.min_strict).fold(f64::INFINITY, f64::min);
    let pass = witness.is_none();
    Ok(ConcavityReport {
        property: ConcavityProperty::from_s(s),
        pass,
        strict_observed: pass && min_strict.is_finite() && min_strict > cfg.strict_tol,
        witness,
        min_slack,
        n_pairs: cfg.n_pairs,
        seed: cfg.seed,
        domain: domain.iter().map(|iv| (to_f64(iv.lo()), to_f64(iv.hi()))).collect(),
    })
}

/// Two members of `C_u` whose midpoint is not within a grid cell of `C_u`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelWitness {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub midpoint: Vec<f64>,
    pub f_midpoint: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LevelSetReport {
    pub level: f64,
    pub pass: bool,
    pub points_in_set: usize,
    pub pairs_checked: usize,
    pub witness: Option<LevelWitness>,
}

/// Pairs of set members are checked exhaustively up to this count and
/// sampled beyond it.
pub const EXHAUSTIVE_PAIRS: usize = 200_000;
pub const SAMPLED_PAIRS: usize = 10_000;

/// Convexity of the super-level set `C_u = {x : f(x) ≥ u}` sampled on a grid
/// with `resolution` cells per side.
pub fn check_superlevel_convex<T, F>(f: &F, u: T, domain: &[Interval<T>], resolution: usize, seed: u64) -> Result<LevelSetReport>
where
    T: Real,
    F: Fn(&[T]) -> T + Sync + ?Sized,
{
    bounded_box(domain)?;
    if !(u > T::zero()) {
        return Err(Error::BadParam(format!("level u = {u} must be positive")));
    }
    let res = resolution.max(2);
    let d = domain.len();
    let axes: Vec<Vec<T>> = domain.iter().map(|iv| iv.grid(res)).collect();
    let side = res + 1;
    let total = side.pow(d as u32);
    let index_to_point = |mut i: usize| -> Vec<T> {
        let mut p = vec![T::zero(); d];
        for k in (0..d).rev() {
            p[k] = axes[k][i % side];
            i /= side;
        }
        p
    };
    let inside: Vec<bool> = (0..total).into_par_iter().map(|i| f(&index_to_point(i)) >= u).collect();
    let members: Vec<usize> = (0..total).filter(|&i| inside[i]).collect();
    if members.is_empty() {
        return Err(Error::EmptyLevelSet { level: to_f64(u) });
    }
    let n = members.len();
    let all = n * (n - 1) / 2;
    let pairs: Vec<(usize, usize)> = if all <= EXHAUSTIVE_PAIRS {
        (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect()
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..SAMPLED_PAIRS).map(|_| (rng.gen_range(0..n), rng.gen_range(0..n))).collect()
    };
    let steps: Vec<T> = domain.iter().map(|iv| (iv.hi() - iv.lo()) / lit(res as f64)).collect();
    let corner_member = |mid: &[T]| -> bool {
        let mut lo_idx = vec![0usize; d];
        for (k, slot) in lo_idx.iter_mut().enumerate() {
            let t = ((mid[k] - domain[k].lo()) / steps[k]).floor().to_usize().unwrap_or(0);
            *slot = t.min(res - 1);
        }
        (0..(1usize << d)).any(|mask| {
            let mut flat = 0;
            for (k, &lo) in lo_idx.iter().enumerate() {
                flat = flat * side + lo + ((mask >> k) & 1);
            }
            inside[flat]
        })
    };
    let witness = pairs.par_iter().find_map_first(|&(i, j)| {
        let a = index_to_point(members[i]);
        let b = index_to_point(members[j]);
        let mid = combine(&a, &b, lit(0.5));
        let fm = f(&mid);
        if fm >= u || corner_member(&mid) {
            None
        } else {
            let v = |p: &[T]| p.iter().map(|&x| to_f64(x)).collect::<Vec<f64>>();
            Some(LevelWitness {
                a: v(&a),
                b: v(&b),
                midpoint: v(&mid),
                f_midpoint: to_f64(fm),
            })
        }
    });
    Ok(LevelSetReport {
        level: to_f64(u),
        pass: witness.is_none(),
        points_in_set: n,
        pairs_checked: pairs.len(),
        witness,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Shape {
    Convex,
    Concave,
    LogConcave,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Monotonicity {
    Nondecreasing,
    Nonincreasing,
}

/// Shape of the inner function `h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InnerShape {
    pub shape: Shape,
    pub strict: bool,
}

/// Shape of the monotone outer function `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OuterShape {
    pub monotone: Monotonicity,
    pub strictly_monotone: bool,
    pub shape: Shape,
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ComposedShape {
    pub shape: Shape,
    pub strict: bool,
}

/// Predicted shape of `H∘h`:
///
/// * `h` convex, `H` nondecreasing convex → convex;
/// * `h` convex, `H` nonincreasing log-concave (concave) → log-concave (concave);
/// * `h` concave, `H` nondecreasing log-concave (concave) → log-concave (concave).
///
/// The result is strict when `H` is strictly curved, or when `h` is strictly
/// curved and `H` strictly monotone.
pub fn compose_rule(h: InnerShape, outer: OuterShape) -> Result<ComposedShape> {
    use Monotonicity::*;
    use Shape::*;
    let shape = match (h.shape, outer.monotone, outer.shape) {
        (Convex, Nondecreasing, Convex) => Convex,
        (Convex, Nonincreasing, s @ (LogConcave | Concave)) => s,
        (Concave, Nondecreasing, s @ (LogConcave | Concave)) => s,
        combo => return Err(Error::RuleNotCovered(format!("{combo:?}"))),
    };
    Ok(ComposedShape {
        shape,
        strict: outer.strict || (h.strict && outer.strictly_monotone),
    })
}

/// Exponent of the marginals after integrating out `m` coordinates:
/// `s/(1 + ms)`, and `−∞` at `s = −1/m`.
pub fn marginal_exponent(s: f64, m: usize) -> Result<f64> {
    let mf = m as f64;
    if m == 0 {
        return Ok(s);
    }
    if s == f64::NEG_INFINITY || s < -1.0 / mf - 1e-15 {
        return Err(Error::HypothesisViolated(format!("s = {s} < -1/{m}")));
    }
    let den = 1.0 + mf * s;
    Ok(if den.abs() <= 1e-15 { f64::NEG_INFINITY } else { s / den })
}

#[derive(Debug, Clone, PartialEq)]
pub struct MarginalReport {
    pub s: f64,
    pub s_marginal: f64,
    pub report: ConcavityReport,
}

/// Integrates out the trailing coordinates of `f` (ranges in `dropped`) and
/// tests the marginal on `kept` for s/(1+ms)-concavity.
pub fn check_marginal_sconcavity<T, F>(
    f: &F,
    s: f64,
    kept: &[Interval<T>],
    dropped: &[Interval<T>],
    quad: &QuadSpec<T>,
    cfg: &PairConfig,
) -> Result<MarginalReport>
where
    T: Real,
    F: Fn(&[T]) -> T + Sync + ?Sized,
{
    if kept.len() + dropped.len() > 3 || dropped.is_empty() {
        return Err(Error::BadParam(format!(
            "need 1 ≤ m and d + m ≤ 3, got d = {}, m = {}",
            kept.len(),
            dropped.len()
        )));
    }
    let s_m = marginal_exponent(s, dropped.len())?;
    let d = kept.len();
    let marginal = |y: &[T]| -> T {
        let inner = |z: &[T]| {
            let mut p = Vec::with_capacity(d + z.len());
            p.extend_from_slice(y);
            p.extend_from_slice(z);
            f(&p)
        };
        integrate_box(&inner, dropped, quad).unwrap_or(T::nan())
    };
    let report = check_sconcave(&marginal, s_m, kept, cfg)?;
    Ok(MarginalReport { s, s_marginal: s_m, report })
}
