//! Battery for the equivalent conditions linking two laws that share a
//! symmetric base:
//!
//! * (a) equal symmetric bases after decomposition,
//! * (b) `E t(X) = E t(Y)` for even `t`,
//! * (c′) `|X|` and `|Y|` equal in distribution,
//! * (d) `F(x) + F̄(−x) = H(x) + H̄(−x)`,
//! * (e) `f(x) + f(−x) = h(x) + h(−x)`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::special::{norm_cdf, norm_quantile};
use crate::numerics::{integrate_box, ks, Interval, QuadSpec};
use crate::perturb::decompose_with_support;
use crate::real::{lit, to_f64, Real};
use crate::skew1d::SkewDensity1D;

/// A law on `ℝᵈ` with a density and a seeded sampler.
pub trait Law<T: Real>: Send + Sync {
    fn dim(&self) -> usize;
    fn density(&self, x: &[T]) -> T;
    /// `n` draws flattened row-major into `n · dim` values.
    fn sample(&self, n: usize, seed: u64) -> Vec<T>;
    /// Whether `E‖X‖ᵏ` is finite.
    fn has_abs_moment(&self, k: T) -> bool;
    fn name(&self) -> String;
    /// Box containing the support, used for normalization checks.
    fn support_box(&self) -> Vec<Interval<T>> {
        vec![Interval::real_line(); self.dim()]
    }
}

impl<T: Real> Law<T> for SkewDensity1D<T> {
    fn dim(&self) -> usize {
        1
    }

    fn density(&self, x: &[T]) -> T {
        self.pdf(x[0])
    }

    fn sample(&self, n: usize, seed: u64) -> Vec<T> {
        SkewDensity1D::sample(self, n, seed)
    }

    fn has_abs_moment(&self, k: T) -> bool {
        self.base().has_moment(k)
    }

    fn name(&self) -> String {
        SkewDensity1D::name(self)
    }

    fn support_box(&self) -> Vec<Interval<T>> {
        vec![self.base().support()]
    }
}

/// Condition labels in report order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Condition {
    A,
    B,
    CPrime,
    D,
    E,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::A => "a",
            Condition::B => "b",
            Condition::CPrime => "c'",
            Condition::D => "d",
            Condition::E => "e",
        })
    }
}

/// Outcome of one condition. A failed verdict always carries either a
/// witness point or a test statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct ConditionVerdict {
    pub condition: Condition,
    pub pass: bool,
    pub witness: Option<Vec<f64>>,
    /// Largest discrepancy (deterministic checks), KS statistic (c′) or
    /// largest |z| score (b).
    pub statistic: f64,
    pub detail: String,
}

/// Tolerances and Monte Carlo settings of the battery.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CharConfig {
    pub seed: u64,
    pub n_mc: usize,
    pub ks_level: f64,
    pub z_max: f64,
    pub pointwise_tol: f64,
    pub integral_tol: f64,
}

impl Default for CharConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            n_mc: 100_000,
            ks_level: 0.01,
            z_max: 3.0,
            pointwise_tol: 1e-9,
            integral_tol: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CharReport {
    pub verdicts: Vec<ConditionVerdict>,
    pub config: CharConfig,
}

impl CharReport {
    pub fn verdict(&self, c: Condition) -> &ConditionVerdict {
        self.verdicts.iter().find(|v| v.condition == c).expect("every condition is reported")
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn all_fail(&self) -> bool {
        self.verdicts.iter().all(|v| !v.pass)
    }

    /// `true` when the conditions agree, as their equivalence demands.
    pub fn unanimous(&self) -> bool {
        self.all_pass() || self.all_fail()
    }
}

fn pointwise_grid<T: Real>(dim: usize) -> Vec<Vec<T>> {
    let (half, n) = if dim == 1 {
        (8.0, 200)
    } else if dim == 2 {
        (4.0, 20)
    } else {
        (3.0, 10)
    };
    let axis = Interval::new(lit::<T>(-half), lit(half)).expect("finite").grid(n);
    let mut pts: Vec<Vec<T>> = vec![Vec::new()];
    for _ in 0..dim {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    pts
}

fn neg<T: Real>(x: &[T]) -> Vec<T> {
    x.iter().map(|&v| -v).collect()
}

fn to_vec64<T: Real>(x: &[T]) -> Vec<f64> {
    x.iter().map(|&v| to_f64(v)).collect()
}

fn check_e<T: Real>(f: &dyn Law<T>, h: &dyn Law<T>, cfg: &CharConfig) -> ConditionVerdict {
    let mut worst = (0.0, None);
    for x in pointwise_grid::<T>(f.dim()) {
        let m = neg(&x);
        let d = to_f64((f.density(&x) + f.density(&m)) - (h.density(&x) + h.density(&m))).abs();
        if d > worst.0 {
            worst = (d, Some(x));
        }
    }
    let pass = worst.0 <= cfg.pointwise_tol;
    ConditionVerdict {
        condition: Condition::E,
        pass,
        witness: if pass { None } else { worst.1.map(|x| to_vec64(&x)) },
        statistic: worst.0,
        detail: "max |f(x)+f(-x)-h(x)-h(-x)| on grid".into(),
    }
}

fn check_a<T: Real>(f: &dyn Law<T>, h: &dyn Law<T>, cfg: &CharConfig) -> Result<ConditionVerdict> {
    let df = decompose_law(f)?;
    let dh = decompose_law(h)?;
    let mut worst = (0.0, None);
    for x in pointwise_grid::<T>(f.dim()) {
        let d = to_f64(df.f0(&x) - dh.f0(&x)).abs();
        if d > worst.0 {
            worst = (d, Some(x));
        }
    }
    let pass = worst.0 <= cfg.pointwise_tol;
    Ok(ConditionVerdict {
        condition: Condition::A,
        pass,
        witness: if pass { None } else { worst.1.map(|x| to_vec64(&x)) },
        statistic: worst.0,
        detail: "max |f0 - h0| of the decompositions on grid".into(),
    })
}

fn decompose_law<'a, T: Real>(law: &'a dyn Law<T>) -> Result<crate::perturb::Decomposition<'a, T>> {
    let support = law.support_box();
    decompose_with_support(move |x: &[T]| law.density(x), law.dim(), Some(&support))
}

fn d_points<T: Real>(dim: usize) -> Vec<Vec<T>> {
    match dim {
        1 => Interval::new(lit::<T>(-4.0), lit(4.0))
            .expect("finite")
            .grid(20)
            .into_iter()
            .map(|x| vec![x])
            .collect(),
        _ => [0.0, 0.7, -1.2]
            .iter()
            .map(|&a| (0..dim).map(|i| lit::<T>(a + 0.4 * i as f64)).collect())
            .collect(),
    }
}

fn check_d<T: Real>(f: &dyn Law<T>, h: &dyn Law<T>, cfg: &CharConfig) -> Result<ConditionVerdict> {
    let spec = QuadSpec::default().with_abs_tol(crate::real::tol(1e-9));
    let mut worst = (0.0, None);
    for x in d_points::<T>(f.dim()) {
        // F(x) + F̄(−x) = ∫_{u ≤ x} f(u) + f(−u) du, so the difference of
        // the two sides is one orthant integral.
        let ranges: Vec<Interval<T>> = x.iter().map(|&b| Interval::new(T::neg_infinity(), b)).collect::<Result<_>>()?;
        let diff = |u: &[T]| {
            let m = neg(u);
            (f.density(u) + f.density(&m)) - (h.density(u) + h.density(&m))
        };
        let d = to_f64(integrate_box(&diff, &ranges, &spec)?).abs();
        if d > worst.0 {
            worst = (d, Some(x));
        }
    }
    let pass = worst.0 <= cfg.integral_tol;
    Ok(ConditionVerdict {
        condition: Condition::D,
        pass,
        witness: if pass { None } else { worst.1.map(|x| to_vec64(&x)) },
        statistic: worst.0,
        detail: "max |F(x)+Fbar(-x)-H(x)-Hbar(-x)|".into(),
    })
}

fn norms<T: Real>(sample: &[T], dim: usize) -> Vec<T> {
    sample.chunks(dim).map(|c| c.iter().map(|&v| v * v).sum::<T>().sqrt()).collect()
}

fn check_c_prime<T: Real>(xs: &[T], ys: &[T], dim: usize, cfg: &CharConfig) -> ConditionVerdict {
    let r = ks::two_sample(&norms(xs, dim), &norms(ys, dim));
    let pass = r.passes(lit(cfg.ks_level));
    ConditionVerdict {
        condition: Condition::CPrime,
        pass,
        witness: None,
        statistic: to_f64(r.statistic),
        detail: format!("two-sample KS on |X| vs |Y|, p = {:.3e}", to_f64(r.p_value)),
    }
}

/// Even test function with the absolute moment order its variance needs.
struct EvenTest<T> {
    name: &'static str,
    needs_moment: f64,
    t: fn(&[T]) -> T,
}

fn even_tests<T: Real>() -> Vec<EvenTest<T>> {
    vec![
        EvenTest {
            name: "x^2",
            needs_moment: 4.0,
            t: |x| x.iter().map(|&v| v * v).sum(),
        },
        EvenTest {
            name: "|x|",
            needs_moment: 2.0,
            t: |x| x.iter().map(|v| v.abs()).sum(),
        },
        EvenTest {
            name: "cos x",
            needs_moment: 0.0,
            t: |x| x.iter().copied().sum::<T>().cos(),
        },
    ]
}

fn mean_var<T: Real>(sample: &[T], dim: usize, t: fn(&[T]) -> T) -> (f64, f64, f64) {
    let vals: Vec<f64> = sample.chunks(dim).map(|c| to_f64(t(c))).collect();
    let n = vals.len() as f64;
    let m = vals.iter().sum::<f64>() / n;
    let v = vals.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (n - 1.0);
    (m, v, n)
}

fn check_b<T: Real>(f: &dyn Law<T>, h: &dyn Law<T>, xs: &[T], ys: &[T], cfg: &CharConfig) -> ConditionVerdict {
    let dim = f.dim();
    let mut worst: (f64, &str) = (0.0, "");
    let mut used = Vec::new();
    for test in even_tests::<T>() {
        let k: T = lit(test.needs_moment);
        if !(f.has_abs_moment(k) && h.has_abs_moment(k)) {
            continue;
        }
        let (m1, v1, n1) = mean_var(xs, dim, test.t);
        let (m2, v2, n2) = mean_var(ys, dim, test.t);
        let se = (v1 / n1 + v2 / n2).sqrt();
        let z = if se > 0.0 {
            (m1 - m2).abs() / se
        } else if m1 == m2 {
            0.0
        } else {
            f64::INFINITY
        };
        used.push(test.name);
        if z > worst.0 {
            worst = (z, test.name);
        }
    }
    let pass = worst.0 <= cfg.z_max;
    ConditionVerdict {
        condition: Condition::B,
        pass,
        witness: None,
        statistic: worst.0,
        detail: if pass {
            format!("Monte Carlo means agree for t in {{{}}}", used.join(", "))
        } else {
            format!("Monte Carlo means differ for t = {} (|z| = {:.2})", worst.1, worst.0)
        },
    }
}

/// Independent seeds for the two laws.
fn stream_seeds(seed: u64) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (rng.gen(), rng.gen())
}

/// Runs all five checks on the pair `(f, h)`.
pub fn check_common_base<T: Real>(f: &dyn Law<T>, h: &dyn Law<T>, cfg: &CharConfig) -> Result<CharReport> {
    if f.dim() != h.dim() {
        return Err(Error::DimensionMismatch {
            expected: f.dim(),
            found: h.dim(),
        });
    }
    if !(1..=3).contains(&f.dim()) {
        return Err(Error::BadParam(format!("dimension {} not supported", f.dim())));
    }
    let (sf, sh) = stream_seeds(cfg.seed);
    let (xs, ys) = rayon::join(|| f.sample(cfg.n_mc, sf), || h.sample(cfg.n_mc, sh));
    let mut verdicts = vec![
        check_a(f, h, cfg)?,
        check_b(f, h, &xs, &ys, cfg),
        check_c_prime(&xs, &ys, f.dim(), cfg),
        check_d(f, h, cfg)?,
        check_e(f, h, cfg),
    ];
    verdicts.sort_by_key(|v| v.condition);
    Ok(CharReport { verdicts, config: *cfg })
}

/// One pair of the coherence battery with its report.
#[derive(Debug, Clone)]
pub struct CoherenceCase {
    pub f_name: String,
    pub h_name: String,
    pub same_base: bool,
    pub report: CharReport,
}

fn same_base<T: Real>(a: &SkewDensity1D<T>, b: &SkewDensity1D<T>) -> bool {
    a.base().kind() == b.base().kind()
}

/// Seeded pairs from the univariate catalog, alternating between pairs
/// that share a base and pairs that do not.
pub fn coherence_pairs<T: Real>(seed: u64, count: usize) -> Vec<(String, SkewDensity1D<T>, String, SkewDensity1D<T>)> {
    let cat = crate::catalog::univariate::<T>();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0xc04e_4ece);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let want_same = out.len() % 2 == 0;
        let i = rng.gen_range(0..cat.len());
        let j = rng.gen_range(0..cat.len());
        if same_base(&cat[i].1, &cat[j].1) != want_same {
            continue;
        }
        out.push((cat[i].0.clone(), cat[i].1.clone(), cat[j].0.clone(), cat[j].1.clone()));
    }
    out
}

/// Per-pair settings for a battery of `count` pairs: the Monte Carlo levels
/// of `cfg` are Bonferroni-split over the pairs and, for (b), over the even
/// test functions, so `cfg` states the family-wise level of the battery.
pub fn battery_config(cfg: &CharConfig, count: usize) -> Result<CharConfig> {
    let m = count.max(1) as f64;
    let tail = 1.0 - norm_cdf(cfg.z_max);
    let z_max = -norm_quantile(tail / (m * even_tests::<f64>().len() as f64))?;
    Ok(CharConfig {
        ks_level: cfg.ks_level / m,
        z_max,
        ..*cfg
    })
}

/// Runs [`check_common_base`] on `count` seeded catalog pairs with the
/// levels of [`battery_config`]. Each pair gets its own Monte Carlo seed
/// derived from `seed`.
pub fn coherence_battery<T: Real>(seed: u64, count: usize, cfg: &CharConfig) -> Result<Vec<CoherenceCase>> {
    let mut seeds = ChaCha8Rng::seed_from_u64(seed);
    let per_pair = battery_config(cfg, count)?;
    coherence_pairs::<T>(seed, count)
        .into_iter()
        .map(|(fname, f, hname, h)| {
            let cfg = CharConfig {
                seed: seeds.gen(),
                ..per_pair
            };
            let report = check_common_base(&f, &h, &cfg)?;
            Ok(CoherenceCase {
                same_base: same_base(&f, &h),
                f_name: fname,
                h_name: hname,
                report,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::SymmetricBase;
    use crate::perturb::PerturbationFn;

    fn t5() -> SkewDensity1D<f64> {
        SkewDensity1D::new(SymmetricBase::student_t(5.0).unwrap(), PerturbationFn::null()).unwrap()
    }

    #[test]
    fn same_base_pair_passes_everything() {
        let f = SkewDensity1D::skew_normal(1.0);
        let h = SkewDensity1D::skew_normal(-3.0);
        let r = check_common_base(&f, &h, &CharConfig::default()).unwrap();
        assert!(r.all_pass(), "{r:#?}");
        assert_eq!(r.verdicts.len(), 5);
    }

    #[test]
    fn different_base_fails_with_witness() {
        let f = SkewDensity1D::skew_normal(1.0);
        let r = check_common_base(&f, &t5(), &CharConfig::default()).unwrap();
        let e = r.verdict(Condition::E);
        assert!(!e.pass);
        assert!(e.witness.is_some());
        assert!(r.all_fail(), "{r:#?}");
        // At the origin the two symmetric parts differ: φ(0) ≠ t₅(0).
        let at0 = 2.0 * (f.pdf(0.0) - t5().pdf(0.0));
        assert!(at0.abs() > 1e-3);
    }

    #[test]
    fn reflexive_pairs_pass() {
        for (_, d) in crate::catalog::univariate::<f64>().into_iter().step_by(3) {
            let r = check_common_base(
                &d,
                &d,
                &CharConfig {
                    n_mc: 20_000,
                    ..Default::default()
                },
            )
            .unwrap();
            assert!(r.all_pass(), "{}: {r:#?}", d.name());
        }
    }

    struct Planar;

    impl Law<f64> for Planar {
        fn dim(&self) -> usize {
            2
        }
        fn density(&self, x: &[f64]) -> f64 {
            crate::numerics::special::norm_pdf(x[0]) * crate::numerics::special::norm_pdf(x[1])
        }
        fn sample(&self, n: usize, _seed: u64) -> Vec<f64> {
            vec![0.0; 2 * n]
        }
        fn has_abs_moment(&self, _k: f64) -> bool {
            true
        }
        fn name(&self) -> String {
            "planar".into()
        }
    }

    #[test]
    fn dimension_mismatch() {
        let f = SkewDensity1D::skew_normal(1.0);
        assert!(matches!(
            check_common_base(&f, &Planar, &CharConfig::default()),
            Err(Error::DimensionMismatch { expected: 1, found: 2 })
        ));
    }

    #[test]
    fn symmetric_set_probabilities() {
        let d = SkewDensity1D::skew_normal(5.0);
        let base = SymmetricBase::<f64>::normal();
        let xs = d.sample(100_000, 11);
        for a in [0.3, 1.0, 2.0] {
            let by_cdf = d.cdf(a).unwrap() - d.cdf(-a).unwrap();
            let hits = xs.iter().filter(|x: &&f64| x.abs() <= a).count() as f64 / xs.len() as f64;
            let se = (by_cdf * (1.0 - by_cdf) / xs.len() as f64).sqrt();
            assert!((hits - by_cdf).abs() <= 3.0 * se, "a={a}");
            assert!((by_cdf - (base.cdf(a) - base.cdf(-a))).abs() <= 1e-7);
        }
    }

    #[test]
    fn battery_levels_are_bonferroni_split() {
        let c = battery_config(&CharConfig::default(), 20).unwrap();
        assert!((c.ks_level - 5e-4).abs() < 1e-15);
        // Upper tail of 3 sigma is 1.3499e-3; split 60 ways it is 2.2498e-5.
        assert!((1.0 - norm_cdf(c.z_max) - 1.3498980316e-3 / 60.0).abs() < 1e-12, "{}", c.z_max);
        assert!(c.z_max > 4.0 && c.z_max < 4.1);
    }

    #[test]
    fn coherence_over_twenty_pairs() {
        let cases = coherence_battery::<f64>(0, 20, &CharConfig::default()).unwrap();
        assert_eq!(cases.len(), 20);
        assert!(cases.iter().any(|c| c.same_base) && cases.iter().any(|c| !c.same_base));
        for c in &cases {
            assert!(c.report.unanimous(), "{} vs {}: {:#?}", c.f_name, c.h_name, c.report);
            assert_eq!(c.report.all_pass(), c.same_base);
        }
    }
}
