//! Centrally symmetric base densities `f₀` on the real line.
//!
//! Each base exposes its density, CDF, quantile function and the
//! negative log-derivative `h₀ = −f₀′/f₀` together with `h₀′`.

use crate::error::{Error, Result};
use crate::numerics::special::{beta_inc, gamma_p, ln_gamma, ln_gamma_q, norm_cdf, norm_ln_cdf, norm_ln_pdf, norm_pdf, norm_quantile};
use crate::numerics::{integrate, Interval, QuadSpec};
use crate::real::{lit, to_f64, Real};

/// Parametric family of a [`SymmetricBase`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BaseKind<T> {
    Normal,
    Logistic,
    Cauchy,
    StudentT {
        nu: T,
    },
    /// Density proportional to `exp(−|x|^ν / ν)`; `ν = 1` is the Laplace law.
    Subbotin {
        nu: T,
    },
    Uniform {
        half_width: T,
    },
}

/// A standardized symmetric density with its derived quantities.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymmetricBase<T> {
    kind: BaseKind<T>,
    norm_const: T,
}

fn positive<T: Real>(v: T, what: &str) -> Result<T> {
    if v > T::zero() && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::BadParam(format!("{what} must be positive and finite, got {}", to_f64(v))))
    }
}

impl<T: Real> SymmetricBase<T> {
    pub fn normal() -> Self {
        Self {
            kind: BaseKind::Normal,
            norm_const: T::one() / T::TAU().sqrt(),
        }
    }

    pub fn logistic() -> Self {
        Self {
            kind: BaseKind::Logistic,
            norm_const: T::one(),
        }
    }

    pub fn cauchy() -> Self {
        Self {
            kind: BaseKind::Cauchy,
            norm_const: T::FRAC_1_PI(),
        }
    }

    pub fn student_t(nu: T) -> Result<Self> {
        let nu = positive(nu, "Student-t degrees of freedom")?;
        let half: T = lit(0.5);
        let ln_c = ln_gamma((nu + T::one()) * half) - ln_gamma(nu * half) - half * (nu * T::PI()).ln();
        Ok(Self {
            kind: BaseKind::StudentT { nu },
            norm_const: ln_c.exp(),
        })
    }

    /// Subbotin (exponential power) base with normalizer
    /// `c_ν = 1 / (2 ν^{1/ν − 1} Γ(1/ν))`.
    pub fn subbotin(nu: T) -> Result<Self> {
        let nu = positive(nu, "Subbotin shape")?;
        let inv = nu.recip();
        let ln_c = -(lit::<T>(2.0).ln() + (inv - T::one()) * nu.ln() + ln_gamma(inv));
        Ok(Self {
            kind: BaseKind::Subbotin { nu },
            norm_const: ln_c.exp(),
        })
    }

    pub fn laplace() -> Self {
        Self {
            kind: BaseKind::Subbotin { nu: T::one() },
            norm_const: lit(0.5),
        }
    }

    pub fn uniform(half_width: T) -> Result<Self> {
        let half_width = positive(half_width, "uniform half-width")?;
        Ok(Self {
            kind: BaseKind::Uniform { half_width },
            norm_const: (half_width + half_width).recip(),
        })
    }

    /// Builds a base from its family name and parameter list.
    pub fn make(name: &str, params: &[T]) -> Result<Self> {
        let want = |n: usize| -> Result<()> {
            if params.len() == n {
                Ok(())
            } else {
                Err(Error::BadParam(format!("base `{name}` takes {n} parameter(s), got {}", params.len())))
            }
        };
        match name {
            "normal" => want(0).map(|_| Self::normal()),
            "logistic" => want(0).map(|_| Self::logistic()),
            "cauchy" => want(0).map(|_| Self::cauchy()),
            "laplace" => want(0).map(|_| Self::laplace()),
            "student_t" | "t" => want(1).and_then(|_| Self::student_t(params[0])),
            "subbotin" => want(1).and_then(|_| Self::subbotin(params[0])),
            "uniform" => want(1).and_then(|_| Self::uniform(params[0])),
            other => Err(Error::BadParam(format!("unknown base `{other}`"))),
        }
    }

    pub fn kind(&self) -> BaseKind<T> {
        self.kind
    }

    pub fn name(&self) -> String {
        match self.kind {
            BaseKind::Normal => "normal".into(),
            BaseKind::Logistic => "logistic".into(),
            BaseKind::Cauchy => "cauchy".into(),
            BaseKind::StudentT { nu } => format!("student_t({nu})"),
            BaseKind::Subbotin { nu } if nu == T::one() => "laplace".into(),
            BaseKind::Subbotin { nu } => format!("subbotin({nu})"),
            BaseKind::Uniform { half_width } => format!("uniform({half_width})"),
        }
    }

    /// Normalizing constant of the density (its value at 0 except for
    /// the logistic, whose kernel is not written with a constant).
    pub fn norm_const(&self) -> T {
        self.norm_const
    }

    pub fn support(&self) -> Interval<T> {
        match self.kind {
            BaseKind::Uniform { half_width } => Interval::new(-half_width, half_width).expect("positive width"),
            _ => Interval::real_line(),
        }
    }

    /// Points where `f₀` or `h₀` fails to be differentiable.
    pub fn non_differentiable_points(&self) -> Vec<T> {
        match self.kind {
            BaseKind::Subbotin { nu } if nu <= T::one() => vec![T::zero()],
            BaseKind::Uniform { half_width } => vec![-half_width, half_width],
            _ => Vec::new(),
        }
    }

    pub fn pdf(&self, x: T) -> T {
        let c = self.norm_const;
        match self.kind {
            BaseKind::Normal => norm_pdf(x),
            BaseKind::Logistic => {
                let e = (-x.abs()).exp();
                e / ((T::one() + e) * (T::one() + e))
            }
            BaseKind::Cauchy => c / (T::one() + x * x),
            BaseKind::StudentT { nu } => c * (x * x / nu).ln_1p().mul_add(-(nu + T::one()) * lit(0.5), T::zero()).exp(),
            BaseKind::Subbotin { nu } => c * (-x.abs().powf(nu) / nu).exp(),
            BaseKind::Uniform { half_width } => {
                if x.abs() <= half_width {
                    c
                } else {
                    T::zero()
                }
            }
        }
    }

    pub fn ln_pdf(&self, x: T) -> T {
        let c = self.norm_const;
        match self.kind {
            BaseKind::Normal => norm_ln_pdf(x),
            BaseKind::Logistic => {
                let a = x.abs();
                -a - lit::<T>(2.0) * (-a).exp().ln_1p()
            }
            BaseKind::Cauchy => c.ln() - (x * x).ln_1p(),
            BaseKind::StudentT { nu } => c.ln() - (nu + T::one()) * lit(0.5) * (x * x / nu).ln_1p(),
            BaseKind::Subbotin { nu } => c.ln() - x.abs().powf(nu) / nu,
            BaseKind::Uniform { .. } => self.pdf(x).ln(),
        }
    }

    pub fn cdf(&self, x: T) -> T {
        let half: T = lit(0.5);
        match self.kind {
            BaseKind::Normal => norm_cdf(x),
            BaseKind::Logistic => {
                if x >= T::zero() {
                    T::one() / (T::one() + (-x).exp())
                } else {
                    let e = x.exp();
                    e / (T::one() + e)
                }
            }
            BaseKind::Cauchy => {
                if x < -T::one() {
                    -(x.recip()).atan() * T::FRAC_1_PI()
                } else {
                    half + x.atan() * T::FRAC_1_PI()
                }
            }
            BaseKind::StudentT { nu } => {
                if x.is_infinite() {
                    return if x > T::zero() { T::one() } else { T::zero() };
                }
                let tail = half * beta_inc(nu * half, half, nu / (nu + x * x)).expect("valid incomplete beta arguments");
                if x < T::zero() {
                    tail
                } else {
                    T::one() - tail
                }
            }
            BaseKind::Subbotin { nu } => {
                if x.is_infinite() {
                    return if x > T::zero() { T::one() } else { T::zero() };
                }
                let z = x.abs().powf(nu) / nu;
                let tail = half * ln_gamma_q(nu.recip(), z).expect("valid incomplete gamma arguments").exp();
                if x < T::zero() {
                    tail
                } else {
                    T::one() - tail
                }
            }
            BaseKind::Uniform { half_width } => ((x + half_width) / (half_width + half_width)).max(T::zero()).min(T::one()),
        }
    }

    /// `ln F₀(x)`, accurate in the lower tail.
    pub fn ln_cdf(&self, x: T) -> T {
        match self.kind {
            BaseKind::Normal => norm_ln_cdf(x),
            BaseKind::Logistic => {
                // −ln(1 + e^{−x})
                if x >= T::zero() {
                    -(-x).exp().ln_1p()
                } else {
                    x - x.exp().ln_1p()
                }
            }
            BaseKind::Subbotin { nu } if x < T::zero() => {
                let z = x.abs().powf(nu) / nu;
                lit::<T>(0.5).ln() + ln_gamma_q(nu.recip(), z).expect("valid incomplete gamma arguments")
            }
            _ => {
                if x < T::zero() {
                    self.cdf(x).ln()
                } else {
                    (-self.cdf(-x)).ln_1p()
                }
            }
        }
    }

    /// `f₀(x) / F₀(x)`, evaluated in log space.
    pub fn pdf_over_cdf(&self, x: T) -> T {
        let lp = self.ln_pdf(x);
        let lc = self.ln_cdf(x);
        if lp == T::neg_infinity() {
            return T::zero();
        }
        if lc == T::neg_infinity() {
            return T::infinity();
        }
        (lp - lc).exp()
    }

    pub fn quantile(&self, p: T) -> Result<T> {
        if !(p > T::zero() && p < T::one()) {
            return Err(Error::Domain {
                function: "quantile",
                detail: format!("p = {} outside (0, 1)", to_f64(p)),
            });
        }
        let half: T = lit(0.5);
        match self.kind {
            BaseKind::Normal => norm_quantile(p),
            BaseKind::Logistic => Ok(p.ln() - (-p).ln_1p()),
            BaseKind::Cauchy => {
                if p < half {
                    Ok(-(T::PI() * p).tan().recip())
                } else {
                    Ok(T::one() / (T::PI() * (T::one() - p)).tan())
                }
            }
            BaseKind::Subbotin { nu } if nu == T::one() => {
                if p < half {
                    Ok((p + p).ln())
                } else {
                    Ok(-((T::one() - p) * lit(2.0)).ln())
                }
            }
            BaseKind::Uniform { half_width } => Ok(half_width * (p + p - T::one())),
            BaseKind::StudentT { .. } | BaseKind::Subbotin { .. } => {
                if p > half {
                    return self.quantile(T::one() - p).map(|q| -q);
                }
                if p == half {
                    return Ok(T::zero());
                }
                let mut lo = -T::one();
                while self.cdf(lo) > p {
                    lo = lo * lit(2.0);
                    if lo.is_infinite() {
                        return Ok(T::neg_infinity());
                    }
                }
                Ok(self.newton_quantile(p, lo, T::zero()))
            }
        }
    }

    /// Newton iteration on `F₀(x) = p` kept inside the bracket `[lo, hi]`,
    /// falling back to bisection when a step leaves it.
    fn newton_quantile(&self, p: T, mut lo: T, mut hi: T) -> T {
        let mut x = lit::<T>(0.5) * (lo + hi);
        if let Ok(z) = norm_quantile(p) {
            if z > lo && z < hi {
                x = z;
            }
        }
        for _ in 0..200 {
            let fx = self.cdf(x) - p;
            if fx == T::zero() {
                return x;
            }
            if fx < T::zero() {
                lo = x;
            } else {
                hi = x;
            }
            let step = fx / self.pdf(x);
            let mut next = x - step;
            if !(next > lo && next < hi) {
                next = lit::<T>(0.5) * (lo + hi);
            }
            if (next - x).abs() <= lit::<T>(4.0) * T::epsilon() * x.abs().max(T::min_positive_value()) || hi - lo <= T::epsilon() * x.abs() {
                return next;
            }
            x = next;
        }
        x
    }

    /// `h₀(x) = −f₀′(x)/f₀(x)`.
    pub fn h0(&self, x: T) -> T {
        match self.kind {
            BaseKind::Normal => x,
            BaseKind::Logistic => (x * lit(0.5)).tanh(),
            BaseKind::Cauchy => (x + x) / (T::one() + x * x),
            BaseKind::StudentT { nu } => (nu + T::one()) / nu * x / (T::one() + x * x / nu),
            BaseKind::Subbotin { nu } => {
                if x == T::zero() {
                    T::zero()
                } else {
                    x.signum() * x.abs().powf(nu - T::one())
                }
            }
            BaseKind::Uniform { .. } => T::zero(),
        }
    }

    /// `h₀′(x)`, or `None` where it does not exist.
    pub fn h0_prime(&self, x: T) -> Option<T> {
        match self.kind {
            BaseKind::Normal => Some(T::one()),
            BaseKind::Logistic => {
                let s = (x * lit(0.5)).cosh();
                Some(lit::<T>(0.5) / (s * s))
            }
            BaseKind::Cauchy => {
                let d = T::one() + x * x;
                Some(lit::<T>(2.0) * (T::one() - x * x) / (d * d))
            }
            BaseKind::StudentT { nu } => {
                let d = nu + x * x;
                Some((nu + T::one()) * (nu - x * x) / (d * d))
            }
            BaseKind::Subbotin { nu } => {
                if x == T::zero() && nu < lit(2.0) {
                    None
                } else if nu == lit(2.0) {
                    Some(T::one())
                } else {
                    Some((nu - T::one()) * x.abs().powf(nu - lit(2.0)))
                }
            }
            BaseKind::Uniform { half_width } => {
                if x.abs() == half_width {
                    None
                } else {
                    Some(T::zero())
                }
            }
        }
    }

    /// Whether `E|X|^k` is finite.
    pub fn has_moment(&self, k: T) -> bool {
        match self.kind {
            BaseKind::Cauchy => k < T::one(),
            BaseKind::StudentT { nu } => k < nu,
            _ => true,
        }
    }

    /// Absolute moment `E|X|^k`.
    pub fn abs_moment(&self, k: T) -> Result<T> {
        if k < T::zero() {
            return Err(Error::BadParam(format!("moment order {} must be non-negative", to_f64(k))));
        }
        if !self.has_moment(k) {
            let bound = match self.kind {
                BaseKind::StudentT { nu } => to_f64(nu),
                _ => 1.0,
            };
            return Err(Error::MomentUndefined {
                order: to_f64(k).ceil() as u32,
                reason: format!("{} has finite absolute moments only below order {bound}", self.name()),
            });
        }
        let half: T = lit(0.5);
        let sqrt_pi = T::PI().sqrt();
        Ok(match self.kind {
            BaseKind::Normal => (k * half * lit::<T>(2.0).ln() + ln_gamma((k + T::one()) * half)).exp() / sqrt_pi,
            BaseKind::Cauchy => (k * T::FRAC_PI_2()).cos().recip(),
            BaseKind::StudentT { nu } => {
                (k * half * nu.ln() + ln_gamma((k + T::one()) * half) + ln_gamma((nu - k) * half) - ln_gamma(nu * half)).exp() / sqrt_pi
            }
            BaseKind::Subbotin { nu } => (k / nu * nu.ln() + ln_gamma((k + T::one()) / nu) - ln_gamma(nu.recip())).exp(),
            BaseKind::Uniform { half_width } => half_width.powf(k) / (k + T::one()),
            BaseKind::Logistic => {
                let spec = QuadSpec::tight();
                let pos = Interval::new(T::zero(), T::infinity())?;
                lit::<T>(2.0) * integrate(|x: T| x.powf(k) * self.pdf(x), pos, &spec)?
            }
        })
    }

    /// Raw moment `E X^k` for integer `k`; odd moments vanish.
    pub fn moment(&self, k: u32) -> Result<T> {
        let m = self.abs_moment(lit(k as f64))?;
        Ok(if k % 2 == 1 { T::zero() } else { m })
    }

    /// Inverse-CDF draw from a uniform variate.
    pub fn draw(&self, u: T) -> T {
        // u = 0 has probability zero under the generators used here.
        let u = u.max(T::min_positive_value());
        self.quantile(u).unwrap_or(T::zero())
    }
}

/// Subbotin CDF `½(1 + sgn(t) P(1/ν, |t|^ν/ν))` written with the
/// regularized lower incomplete gamma.
pub fn subbotin_cdf_by_gamma<T: Real>(nu: T, t: T) -> Result<T> {
    let p = gamma_p(nu.recip(), t.abs().powf(nu) / nu)?;
    Ok(lit::<T>(0.5) * (T::one() + t.signum() * p))
}
