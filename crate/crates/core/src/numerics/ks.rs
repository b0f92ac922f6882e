//! Kolmogorov–Smirnov statistics with the asymptotic Kolmogorov p-value.

use crate::real::{lit, Real};

/// Statistic `D` and asymptotic p-value of a KS test.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KsResult<T> {
    pub statistic: T,
    pub p_value: T,
    /// Effective sample size used for the p-value.
    pub n_eff: T,
}

impl<T: Real> KsResult<T> {
    /// `true` when the test does not reject at significance `level`.
    pub fn passes(&self, level: T) -> bool {
        self.p_value > level
    }
}

/// Survival function of the Kolmogorov distribution, `P(K > z)`.
pub fn kolmogorov_q<T: Real>(z: T) -> T {
    if z <= T::zero() {
        return T::one();
    }
    if z < lit(1.18) {
        let y = (lit::<T>(-1.233_700_550_136_169_8) / (z * z)).exp();
        let p = lit::<T>(2.256_758_334_191_025) * (-y.ln()).sqrt() * (y + y.powi(9) + y.powi(25) + y.powi(49));
        (T::one() - p).max(T::zero())
    } else {
        let x = (lit::<T>(-2.0) * z * z).exp();
        (lit::<T>(2.0) * (x - x.powi(4) + x.powi(9))).min(T::one())
    }
}

fn p_value<T: Real>(d: T, n_eff: T) -> T {
    let s = n_eff.sqrt();
    kolmogorov_q((s + lit(0.12) + lit::<T>(0.11) / s) * d)
}

fn sorted<T: Real>(xs: &[T]) -> Vec<T> {
    let mut v = xs.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("KS sample contains NaN"));
    v
}

/// One-sample test of `sample` against the continuous CDF `cdf`.
pub fn one_sample<T: Real, F: Fn(T) -> T>(sample: &[T], cdf: F) -> KsResult<T> {
    let xs = sorted(sample);
    let n: T = lit(xs.len() as f64);
    let mut d = T::zero();
    for (i, &x) in xs.iter().enumerate() {
        let f = cdf(x);
        let lo = lit::<T>(i as f64) / n;
        let hi = lit::<T>((i + 1) as f64) / n;
        d = d.max((f - lo).abs()).max((hi - f).abs());
    }
    KsResult {
        statistic: d,
        p_value: p_value(d, n),
        n_eff: n,
    }
}

/// Two-sample test.
pub fn two_sample<T: Real>(a: &[T], b: &[T]) -> KsResult<T> {
    let (xa, xb) = (sorted(a), sorted(b));
    let (na, nb) = (xa.len(), xb.len());
    let (fa, fb): (T, T) = (lit(na as f64), lit(nb as f64));
    let (mut i, mut j) = (0, 0);
    let mut d = T::zero();
    while i < na && j < nb {
        let x = xa[i].min(xb[j]);
        while i < na && xa[i] <= x {
            i += 1;
        }
        while j < nb && xb[j] <= x {
            j += 1;
        }
        let diff = (lit::<T>(i as f64) / fa - lit::<T>(j as f64) / fb).abs();
        d = d.max(diff);
    }
    let n_eff = fa * fb / (fa + fb);
    KsResult {
        statistic: d,
        p_value: p_value(d, n_eff),
        n_eff,
    }
}
