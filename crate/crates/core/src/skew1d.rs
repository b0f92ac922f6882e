//! Univariate skew-symmetric laws `f(x) = 2 f₀(x) G(x)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bases::SymmetricBase;
use crate::error::{Error, Result};
use crate::numerics::quad::integrate_pieces;
use crate::numerics::{brent_root, Interval, QuadSpec};
use crate::perturb::PerturbationFn;
use crate::real::{lit, to_f64, Real};

const NORMALIZATION_TOL: f64 = 1e-6;

/// The density `2 f₀ G` with its normalization diagnostic.
#[derive(Debug, Clone)]
pub struct SkewDensity1D<T> {
    base: SymmetricBase<T>,
    perturb: PerturbationFn<T>,
    quad: QuadSpec<T>,
    normalization: T,
}

impl<T: Real> SkewDensity1D<T> {
    pub fn new(base: SymmetricBase<T>, perturb: PerturbationFn<T>) -> Result<Self> {
        Self::with_quad(base, perturb, QuadSpec::default())
    }

    /// Builds the law with a caller-chosen quadrature tolerance.
    pub fn with_quad(base: SymmetricBase<T>, perturb: PerturbationFn<T>, quad: QuadSpec<T>) -> Result<Self> {
        let mut d = Self {
            base,
            perturb,
            quad,
            normalization: T::zero(),
        };
        let total = d.integrate_pdf(d.base.support(), |_| T::one())?;
        if !((total - T::one()).abs() <= crate::real::tol(NORMALIZATION_TOL)) {
            return Err(Error::NotADensity { integral: to_f64(total) });
        }
        d.normalization = total;
        Ok(d)
    }

    /// Skew-normal `2φ(x)Φ(αx)`.
    pub fn skew_normal(alpha: T) -> Self {
        Self::new(SymmetricBase::normal(), PerturbationFn::skew_normal(alpha)).expect("skew-normal is a density")
    }

    pub fn base(&self) -> &SymmetricBase<T> {
        &self.base
    }

    pub fn perturbation(&self) -> &PerturbationFn<T> {
        &self.perturb
    }

    pub fn quad_spec(&self) -> &QuadSpec<T> {
        &self.quad
    }

    /// `∫ f` as computed at construction.
    pub fn normalization(&self) -> T {
        self.normalization
    }

    pub fn name(&self) -> String {
        format!("2·{}·{}", self.base.name(), self.perturb.name())
    }

    fn breakpoints(&self) -> Vec<T> {
        let mut b = self.base.non_differentiable_points();
        b.extend(self.perturb.non_differentiable_points());
        b
    }

    fn integrate_pdf<F: Fn(T) -> T>(&self, iv: Interval<T>, weight: F) -> Result<T> {
        integrate_pieces(|x| weight(x) * self.pdf(x), iv, &self.breakpoints(), &self.quad)
    }

    pub fn pdf(&self, x: T) -> T {
        let f0 = self.base.pdf(x);
        if f0 == T::zero() {
            return T::zero();
        }
        lit::<T>(2.0) * f0 * self.perturb.eval(x)
    }

    pub fn ln_pdf(&self, x: T) -> T {
        lit::<T>(2.0).ln() + self.base.ln_pdf(x) + self.perturb.ln_eval(x)
    }

    /// `(log f)′ = −h₀ + h_g`, when `G′` is available.
    pub fn log_slope(&self, x: T) -> Option<T> {
        self.perturb.log_slope(x).map(|hg| hg - self.base.h0(x))
    }

    /// CDF by direct quadrature from the lower end of the support.
    pub fn cdf_by_quadrature(&self, x: T) -> Result<T> {
        let support = self.base.support();
        if x <= support.lo() {
            return Ok(T::zero());
        }
        if x >= support.hi() {
            return Ok(T::one());
        }
        let lo = support.lo();
        let v = self.integrate_pdf(Interval::new(lo, x)?, |_| T::one())?;
        Ok(v.max(T::zero()).min(T::one()))
    }

    /// CDF; for `x > 0` the survival identity `F(x) = 2F₀(x) − 1 + F(−x)`
    /// reduces the work to a left-tail integral.
    pub fn cdf(&self, x: T) -> Result<T> {
        if x <= T::zero() || x >= self.base.support().hi() {
            return self.cdf_by_quadrature(x);
        }
        let left = self.cdf_by_quadrature(-x)?;
        let v = lit::<T>(2.0) * self.base.cdf(x) - T::one() + left;
        Ok(v.max(T::zero()).min(T::one()))
    }

    /// CDF at many points, integrating between consecutive sorted points.
    /// Results are returned in input order.
    pub fn cdf_many(&self, xs: &[T]) -> Result<Vec<T>> {
        let mut idx: Vec<usize> = (0..xs.len()).collect();
        idx.sort_by(|&a, &b| xs[a].partial_cmp(&xs[b]).expect("NaN passed to cdf_many"));
        let mut out = vec![T::zero(); xs.len()];
        let mut prev: Option<(T, T)> = None;
        for &i in &idx {
            let x = xs[i];
            let v = match prev {
                None => self.cdf(x)?,
                Some((px, pv)) if px == x => pv,
                Some((px, pv)) => pv + self.integrate_pdf(Interval::new(px, x)?, |_| T::one())?,
            };
            out[i] = v.max(T::zero()).min(T::one());
            prev = Some((x, v));
        }
        Ok(out)
    }

    /// Smallest `x` with `F(x) = p`, to `|F(x) − p| ≤ 1e-8`.
    pub fn quantile(&self, p: T) -> Result<T> {
        if !(p > T::zero() && p < T::one()) {
            return Err(Error::Domain {
                function: "quantile",
                detail: format!("p = {} outside (0, 1)", to_f64(p)),
            });
        }
        let support = self.base.support();
        let start = self.base.quantile(p)?;
        let f = |x: T| self.cdf(x).map(|c| c - p);
        let f_start = f(start)?;
        if f_start == T::zero() {
            return Ok(start);
        }
        // Walk away from the base quantile until the sign changes.
        let dir = if f_start < T::zero() { T::one() } else { -T::one() };
        let mut step = start.abs().max(T::one()) * lit(0.5);
        let mut a = start;
        let mut fa = f_start;
        let (b, fb) = loop {
            let b = support.clamp(a + dir * step);
            let fb = f(b)?;
            if fb == T::zero() || (fb > T::zero()) != (fa > T::zero()) {
                break (b, fb);
            }
            if b == a || b.is_infinite() {
                return Err(Error::Domain {
                    function: "quantile",
                    detail: format!("could not bracket p = {}", to_f64(p)),
                });
            }
            a = b;
            fa = fb;
            step = step * lit(2.0);
        };
        if fb == T::zero() {
            return Ok(b);
        }
        let (lo, hi) = if a < b { (a, b) } else { (b, a) };
        let g = |x: T| f(x).unwrap_or(T::nan());
        brent_root(g, lo, hi)
    }

    /// Draws `n` variates: `X₀ ~ f₀` by inversion, kept with probability
    /// `G(X₀)` and reflected otherwise.
    pub fn sample(&self, n: usize, seed: u64) -> Vec<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n)
            .map(|_| {
                let u: f64 = rng.gen();
                let v: f64 = rng.gen();
                let x0 = self.base.draw(lit(u));
                if lit::<T>(v) <= self.perturb.eval(x0) {
                    x0
                } else {
                    -x0
                }
            })
            .collect()
    }

    /// Raw moment `E Xᵏ` by quadrature.
    pub fn moment(&self, k: u32) -> Result<T> {
        let kt: T = lit(k as f64);
        if !self.base.has_moment(kt) {
            return Err(Error::MomentUndefined {
                order: k,
                reason: format!("the base {} has no absolute moment of order {k}", self.base.name()),
            });
        }
        if k == 0 {
            return Ok(self.normalization);
        }
        // Split at the origin so that odd powers do not cancel across panels.
        let support = self.base.support();
        let neg = self.integrate_pdf(Interval::new(support.lo(), T::zero())?, |x| x.powi(k as i32))?;
        let pos = self.integrate_pdf(Interval::new(T::zero(), support.hi())?, |x| x.powi(k as i32))?;
        Ok(neg + pos)
    }

    /// `E t(X)` by quadrature; integrability is the caller's concern.
    pub fn expectation<F: Fn(T) -> T>(&self, t: F) -> Result<T> {
        let support = self.base.support();
        let lo = self.integrate_pdf(Interval::new(support.lo(), T::zero())?, &t)?;
        let hi = self.integrate_pdf(Interval::new(T::zero(), support.hi())?, &t)?;
        Ok(lo + hi)
    }

    pub fn variance(&self) -> Result<T> {
        let m1 = self.moment(1)?;
        Ok(self.moment(2)? - m1 * m1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::numerics::ks;
    use crate::numerics::special::{norm_cdf, norm_pdf};
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn pdf_examples() {
        for a in [-3.0, 0.0, 2.0] {
            assert_relative_eq!(SkewDensity1D::skew_normal(a).pdf(0.0), norm_pdf(0.0), max_relative = 1e-15);
        }
        let sn = SkewDensity1D::skew_normal(1.0f64);
        assert_relative_eq!(sn.pdf(1.0), 2.0 * norm_pdf(1.0) * norm_cdf(1.0), max_relative = 1e-15);
        assert_abs_diff_eq!(sn.pdf(1.0), 0.407_161_6, epsilon = 1e-7);
        let null = SkewDensity1D::new(SymmetricBase::logistic(), PerturbationFn::null()).unwrap();
        for x in [-4.0, -1.0, 0.3, 7.0] {
            assert_eq!(null.pdf(x), null.base().pdf(x));
        }
    }

    /// Double quadrature of `2φ(x)Φ(x)` over `x < 0` written as
    /// `∫∫_{x<0, y<x} 2φ(x)φ(y)`, independent of the library's `Φ`.
    fn skew_normal_cdf0_oracle() -> f64 {
        let phi = |t: f64| (-0.5 * t * t).exp() / (2.0 * std::f64::consts::PI).sqrt();
        let spec = QuadSpec::tight();
        let inner = |x: f64| crate::numerics::integrate(phi, Interval::new(f64::NEG_INFINITY, x).unwrap(), &spec).unwrap();
        crate::numerics::integrate(|x| 2.0 * phi(x) * inner(x), Interval::new(f64::NEG_INFINITY, 0.0).unwrap(), &spec).unwrap()
    }

    #[test]
    fn cdf_examples() {
        let sn = SkewDensity1D::skew_normal(1.0f64);
        assert_abs_diff_eq!(skew_normal_cdf0_oracle(), 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(sn.cdf(0.0).unwrap(), 0.25, epsilon = 1e-9);
        let half = SkewDensity1D::new(SymmetricBase::<f64>::normal(), PerturbationFn::half_line()).unwrap();
        assert_eq!(half.cdf(0.0).unwrap(), 0.0);
        assert_abs_diff_eq!(half.cdf(1.0).unwrap(), 2.0 * norm_cdf(1.0) - 1.0, epsilon = 1e-12);
        for (_, d) in catalog::univariate::<f64>() {
            assert_abs_diff_eq!(d.cdf(f64::INFINITY).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn normalization_of_catalog() {
        let cat = catalog::univariate::<f64>();
        assert_eq!(cat.len(), 12);
        for (name, d) in cat {
            assert!((d.normalization() - 1.0).abs() <= 1e-7, "{name}: {}", d.normalization());
        }
    }

    #[test]
    fn survival_and_symmetric_difference_identities() {
        for (name, d) in catalog::univariate::<f64>() {
            for x in Interval::new(-5.0, 5.0).unwrap().grid(100) {
                let f_x = d.cdf_by_quadrature(x).unwrap();
                let f_mx = d.cdf_by_quadrature(-x).unwrap();
                let f0 = d.base().cdf(x);
                assert_abs_diff_eq!(1.0 - f_mx, 2.0 * f0 - f_x, epsilon = 1e-7);
                assert!(((f_x - f_mx) - (f0 - d.base().cdf(-x))).abs() <= 1e-7, "{name} at {x}");
            }
        }
    }

    #[test]
    fn quantile_examples() {
        let null = SkewDensity1D::new(SymmetricBase::<f64>::normal(), PerturbationFn::null()).unwrap();
        assert_abs_diff_eq!(null.quantile(0.5).unwrap(), 0.0, epsilon = 1e-10);
        let sn = SkewDensity1D::skew_normal(1.0f64);
        assert_abs_diff_eq!(sn.quantile(0.25).unwrap(), 0.0, epsilon = 1e-7);
        let half = SkewDensity1D::new(SymmetricBase::<f64>::normal(), PerturbationFn::half_line()).unwrap();
        let q = half.quantile(0.5).unwrap();
        assert_abs_diff_eq!(q, 0.674_489_750_196_081_7, epsilon = 1e-8);
        assert!(half.quantile(1.0).is_err());
        for (name, d) in catalog::univariate::<f64>() {
            for p in [0.01, 0.3, 0.9] {
                let q = d.quantile(p).unwrap();
                assert!((d.cdf(q).unwrap() - p).abs() <= 1e-8, "{name} p={p}");
            }
        }
    }

    #[test]
    fn moments() {
        let half = SkewDensity1D::new(SymmetricBase::<f64>::normal(), PerturbationFn::half_line()).unwrap();
        assert_relative_eq!(half.moment(1).unwrap(), (2.0 / std::f64::consts::PI).sqrt(), max_relative = 1e-9);
        let null = SkewDensity1D::new(SymmetricBase::<f64>::normal(), PerturbationFn::null()).unwrap();
        assert_abs_diff_eq!(null.moment(1).unwrap(), 0.0, epsilon = 1e-12);
        for (name, d) in catalog::univariate::<f64>() {
            for k in [2u32, 4] {
                match d.base().moment(k) {
                    Ok(m) => assert!((d.moment(k).unwrap() - m).abs() <= 1e-5 * m.max(1.0), "{name} k={k}"),
                    Err(_) => assert!(matches!(d.moment(k), Err(Error::MomentUndefined { order, .. }) if order == k)),
                }
            }
        }
    }

    #[test]
    fn variance_ordering() {
        let v0 = SkewDensity1D::new(SymmetricBase::<f64>::normal(), PerturbationFn::null())
            .unwrap()
            .variance()
            .unwrap();
        let v1 = SkewDensity1D::skew_normal(1.0).variance().unwrap();
        let v2 = SkewDensity1D::skew_normal(4.0).variance().unwrap();
        assert!(v2 <= v1 + 1e-8 && v1 <= v0 + 1e-8, "{v2} {v1} {v0}");
        assert_relative_eq!(v1, 1.0 - 1.0 / std::f64::consts::PI, max_relative = 1e-8);
    }

    #[test]
    fn sampler_is_deterministic_and_correct() {
        let sn = SkewDensity1D::skew_normal(1.0f64);
        assert_eq!(sn.sample(100, 42), sn.sample(100, 42));
        assert_ne!(sn.sample(100, 42), sn.sample(100, 43));
        let null = SkewDensity1D::new(SymmetricBase::<f64>::normal(), PerturbationFn::null()).unwrap();
        let xs = null.sample(100_000, 1);
        let r = ks::one_sample(&xs, norm_cdf);
        assert!(r.statistic < 1.63 / (1e5f64).sqrt(), "{r:?}");
        let mut names = 0;
        for (name, d) in catalog::univariate::<f64>().into_iter().take(6) {
            let xs = d.sample(100_000, 7);
            let cdf = d.cdf_many(&xs).unwrap();
            let mut sorted: Vec<(f64, f64)> = xs.iter().copied().zip(cdf).collect();
            sorted.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
            let lookup: std::collections::HashMap<u64, f64> = sorted.iter().map(|(x, c)| (x.to_bits(), *c)).collect();
            let r = ks::one_sample(&xs, |x| lookup[&x.to_bits()]);
            assert!(r.passes(0.01), "{name}: {r:?}");
            names += 1;
        }
        assert!(names >= 5);
    }

    #[test]
    fn sample_mean_of_skew_normal() {
        let xs = SkewDensity1D::skew_normal(1.0f64).sample(1_000_000, 3);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        // δ√(2/π) with δ = 1/√2.
        let oracle = 1.0 / std::f64::consts::PI.sqrt();
        assert_abs_diff_eq!(oracle, 0.5642, epsilon = 1e-4);
        assert_abs_diff_eq!(mean, oracle, epsilon = 0.003);
    }

    #[test]
    fn cdf_many_matches_pointwise() {
        let d = &catalog::univariate::<f64>()[5].1;
        let xs = [3.0, -2.0, 0.5, -2.0, 10.0];
        let many = d.cdf_many(&xs).unwrap();
        for (x, c) in xs.iter().zip(many) {
            assert_abs_diff_eq!(c, d.cdf(*x).unwrap(), epsilon = 1e-9);
        }
    }
}
