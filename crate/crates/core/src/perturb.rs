//! Perturbation algebra: odd weight functions `w`, perturbation functions
//! `G = G₀∘w`, the minimal representation and the decomposition of a
//! density into its symmetric base and perturbation.

use std::fmt;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bases::SymmetricBase;
use crate::error::{Error, Result};
use crate::numerics::{integrate_box, Interval, QuadSpec};
use crate::real::{lit, to_f64, Real};

/// Three-valued answer for shape properties that are not always decidable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TriState {
    Yes,
    No,
    Unknown,
}

impl TriState {
    pub fn from_bool(b: bool) -> Self {
        if b {
            TriState::Yes
        } else {
            TriState::No
        }
    }

    pub fn is_yes(self) -> bool {
        self == TriState::Yes
    }
}

type ScalarFn<T> = Arc<dyn Fn(T) -> T + Send + Sync>;

#[derive(Clone)]
enum OddKind<T> {
    Linear {
        alpha: T,
    },
    Cubic {
        alpha: T,
        beta: T,
    },
    SkewT {
        alpha: T,
        nu: T,
    },
    /// `Σ c·x^p` over odd powers `p`.
    Poly {
        terms: Vec<(u32, T)>,
    },
    Custom {
        w: ScalarFn<T>,
        dw: Option<ScalarFn<T>>,
    },
}

/// Shape metadata of an odd function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShapeTags {
    pub is_linear: bool,
    pub is_nondecreasing: TriState,
    pub concave_on_positive: TriState,
}

/// An odd real function `w` with optional derivative.
#[derive(Clone)]
pub struct OddFn<T> {
    kind: OddKind<T>,
    name: String,
}

impl<T> fmt::Debug for OddFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OddFn").field("name", &self.name).finish()
    }
}

const ODD_CHECK_SEED: u64 = 0x0dd_5eed;
const ODD_CHECK_POINTS: usize = 100;

impl<T: Real> OddFn<T> {
    pub fn linear(alpha: T) -> Self {
        Self {
            kind: OddKind::Linear { alpha },
            name: format!("linear:{alpha}"),
        }
    }

    pub fn cubic(alpha: T, beta: T) -> Self {
        Self {
            kind: OddKind::Cubic { alpha, beta },
            name: format!("cubic:{alpha},{beta}"),
        }
    }

    /// The skew-t weight `αx·√((ν+1)/(ν+x²))`.
    pub fn skew_t(alpha: T, nu: T) -> Result<Self> {
        if !(nu > T::zero()) {
            return Err(Error::BadParam(format!("skew-t weight needs nu > 0, got {}", to_f64(nu))));
        }
        Ok(Self {
            kind: OddKind::SkewT { alpha, nu },
            name: format!("skewt:{alpha},{nu}"),
        })
    }

    /// Polynomial with odd powers only; `terms` are `(power, coefficient)`.
    pub fn poly(terms: Vec<(u32, T)>) -> Result<Self> {
        if let Some((p, _)) = terms.iter().find(|(p, _)| p % 2 == 0) {
            return Err(Error::BadParam(format!("even power x^{p} in an odd polynomial")));
        }
        let name = terms.iter().map(|(p, c)| format!("{c}x^{p}")).collect::<Vec<_>>().join("+");
        Ok(Self {
            kind: OddKind::Poly { terms },
            name: format!("poly:{name}"),
        })
    }

    /// Wraps a black-box function, checking oddness on a random grid.
    pub fn custom<F>(name: &str, w: F, dw: Option<ScalarFn<T>>) -> Result<Self>
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        let out = Self {
            kind: OddKind::Custom { w: Arc::new(w), dw },
            name: name.to_string(),
        };
        out.validate()?;
        Ok(out)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn eval(&self, x: T) -> T {
        match &self.kind {
            OddKind::Linear { alpha } => *alpha * x,
            OddKind::Cubic { alpha, beta } => *alpha * x + *beta * x * x * x,
            OddKind::SkewT { alpha, nu } => *alpha * x * ((*nu + T::one()) / (*nu + x * x)).sqrt(),
            OddKind::Poly { terms } => terms.iter().map(|&(p, c)| c * x.powi(p as i32)).sum(),
            OddKind::Custom { w, .. } => w(x),
        }
    }

    pub fn derivative(&self, x: T) -> Option<T> {
        match &self.kind {
            OddKind::Linear { alpha } => Some(*alpha),
            OddKind::Cubic { alpha, beta } => Some(*alpha + lit::<T>(3.0) * *beta * x * x),
            OddKind::SkewT { alpha, nu } => {
                let d = *nu + x * x;
                Some(*alpha * (*nu + T::one()).sqrt() * *nu / (d * d.sqrt()))
            }
            OddKind::Poly { terms } => Some(
                terms
                    .iter()
                    .map(|&(p, c)| if p == 0 { T::zero() } else { c * lit(p as f64) * x.powi(p as i32 - 1) })
                    .sum(),
            ),
            OddKind::Custom { dw, .. } => dw.as_ref().map(|d| d(x)),
        }
    }

    pub fn shape(&self) -> ShapeTags {
        let z = T::zero();
        match &self.kind {
            OddKind::Linear { alpha } => ShapeTags {
                is_linear: true,
                is_nondecreasing: TriState::from_bool(*alpha >= z),
                concave_on_positive: TriState::Yes,
            },
            OddKind::Cubic { alpha, beta } => ShapeTags {
                is_linear: *beta == z,
                is_nondecreasing: TriState::from_bool(*alpha >= z && *beta >= z),
                concave_on_positive: TriState::from_bool(*beta <= z),
            },
            OddKind::SkewT { alpha, .. } => ShapeTags {
                is_linear: *alpha == z,
                is_nondecreasing: TriState::from_bool(*alpha >= z),
                concave_on_positive: TriState::from_bool(*alpha >= z),
            },
            OddKind::Poly { terms } => {
                let nz: Vec<_> = terms.iter().filter(|(_, c)| *c != z).collect();
                let is_linear = nz.iter().all(|(p, _)| *p == 1);
                let all_nonneg = nz.iter().all(|(_, c)| *c >= z);
                ShapeTags {
                    is_linear,
                    is_nondecreasing: if all_nonneg { TriState::Yes } else { TriState::Unknown },
                    concave_on_positive: if is_linear { TriState::Yes } else { TriState::Unknown },
                }
            }
            OddKind::Custom { .. } => ShapeTags {
                is_linear: false,
                is_nondecreasing: TriState::Unknown,
                concave_on_positive: TriState::Unknown,
            },
        }
    }

    /// Checks `w(−x) = −w(x)` on a seeded random grid and `w(0) = 0`.
    pub fn validate(&self) -> Result<()> {
        let w0 = self.eval(T::zero());
        if w0.abs() > crate::real::tol::<T>(1e-10) {
            return Err(Error::OddnessViolation {
                x: 0.0,
                residual: to_f64(w0),
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(ODD_CHECK_SEED);
        for _ in 0..ODD_CHECK_POINTS {
            let x: T = lit(rng.gen_range(-10.0..10.0));
            let (a, b) = (self.eval(x), self.eval(-x));
            let r = a + b;
            let scale = a.abs().max(T::one());
            if !(r.abs() <= crate::real::tol::<T>(1e-10) * scale) {
                return Err(Error::OddnessViolation {
                    x: to_f64(x),
                    residual: to_f64(r),
                });
            }
        }
        Ok(())
    }
}

#[derive(Clone)]
enum Repr<T> {
    Composed {
        g0: SymmetricBase<T>,
        w: OddFn<T>,
    },
    Direct {
        g: ScalarFn<T>,
        density: Option<ScalarFn<T>>,
        kinks: Vec<T>,
    },
}

/// A perturbation function: `G ≥ 0` with `G(x) + G(−x) = 1`.
#[derive(Clone)]
pub struct PerturbationFn<T> {
    repr: Repr<T>,
    name: String,
}

impl<T> fmt::Debug for PerturbationFn<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PerturbationFn").field("name", &self.name).finish()
    }
}

const RAW_GRID_N: usize = 400;
const RAW_GRID_HALF_WIDTH: f64 = 20.0;
const RAW_TOL: f64 = 1e-9;

impl<T: Real> PerturbationFn<T> {
    /// `G = G₀∘w` where `G₀` is the CDF of `g0`.
    pub fn compose(g0: SymmetricBase<T>, w: OddFn<T>) -> Result<Self> {
        w.validate()?;
        let name = format!("{}∘{}", g0.name(), w.name());
        Ok(Self {
            repr: Repr::Composed { g0, w },
            name,
        })
    }

    /// The skew-normal perturbation `Φ(αx)`.
    pub fn skew_normal(alpha: T) -> Self {
        Self::compose(SymmetricBase::normal(), OddFn::linear(alpha)).expect("linear weights are odd")
    }

    /// `G ≡ ½`.
    pub fn null() -> Self {
        Self {
            repr: Repr::Direct {
                g: Arc::new(|_| lit(0.5)),
                density: Some(Arc::new(|_| T::zero())),
                kinks: Vec::new(),
            },
            name: "null".into(),
        }
    }

    /// `G = I_{[0,∞)}` with the value ½ at the origin.
    pub fn half_line() -> Self {
        Self {
            repr: Repr::Direct {
                g: Arc::new(|x: T| {
                    if x > T::zero() {
                        T::one()
                    } else if x < T::zero() {
                        T::zero()
                    } else {
                        lit(0.5)
                    }
                }),
                density: Some(Arc::new(|_| T::zero())),
                kinks: vec![T::zero()],
            },
            name: "half_line".into(),
        }
    }

    /// Accepts a black-box `G` if it is non-negative and `G(x) + G(−x) = 1`
    /// holds on a 401-point grid over `[−20, 20]`; the identity is checked
    /// at `x ≠ 0` since it only needs to hold almost everywhere.
    pub fn validate_raw<F>(name: &str, g: F) -> Result<Self>
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        let tol: T = crate::real::tol(RAW_TOL);
        let iv = Interval::new(lit(-RAW_GRID_HALF_WIDTH), lit(RAW_GRID_HALF_WIDTH))?;
        for x in iv.grid(RAW_GRID_N) {
            let v = g(x);
            if !v.is_finite() || v < -tol {
                return Err(Error::NotAPerturbation {
                    x: to_f64(x),
                    reason: format!("G(x) = {} is negative or not finite", to_f64(v)),
                });
            }
            if x != T::zero() {
                let s = v + g(-x);
                if (s - T::one()).abs() > tol {
                    return Err(Error::NotAPerturbation {
                        x: to_f64(x),
                        reason: format!("G(x) + G(-x) = {}", to_f64(s)),
                    });
                }
            }
        }
        Ok(Self {
            repr: Repr::Direct {
                g: Arc::new(g),
                density: None,
                kinks: Vec::new(),
            },
            name: name.to_string(),
        })
    }

    /// Attaches `g = G′` to a directly given perturbation.
    pub fn with_density<F>(mut self, density: F) -> Self
    where
        F: Fn(T) -> T + Send + Sync + 'static,
    {
        if let Repr::Direct { density: d, .. } = &mut self.repr {
            *d = Some(Arc::new(density));
        }
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    /// `(G₀, w)` when the perturbation was built by composition.
    pub fn composed_parts(&self) -> Option<(&SymmetricBase<T>, &OddFn<T>)> {
        match &self.repr {
            Repr::Composed { g0, w } => Some((g0, w)),
            Repr::Direct { .. } => None,
        }
    }

    pub fn eval(&self, x: T) -> T {
        match &self.repr {
            Repr::Composed { g0, w } => g0.cdf(w.eval(x)),
            Repr::Direct { g, .. } => g(x),
        }
    }

    pub fn ln_eval(&self, x: T) -> T {
        match &self.repr {
            Repr::Composed { g0, w } => g0.ln_cdf(w.eval(x)),
            Repr::Direct { g, .. } => g(x).ln(),
        }
    }

    /// `g(x) = G′(x)` if available.
    pub fn density(&self, x: T) -> Option<T> {
        match &self.repr {
            Repr::Composed { g0, w } => w.derivative(x).map(|dw| dw * g0.pdf(w.eval(x))),
            Repr::Direct { density, .. } => density.as_ref().map(|d| d(x)),
        }
    }

    /// `h_g(x) = g(x)/G(x)`, evaluated stably in the lower tail.
    pub fn log_slope(&self, x: T) -> Option<T> {
        match &self.repr {
            Repr::Composed { g0, w } => w
                .derivative(x)
                .map(|dw| if dw == T::zero() { T::zero() } else { dw * g0.pdf_over_cdf(w.eval(x)) }),
            Repr::Direct { g, density, .. } => density.as_ref().map(|d| d(x) / g(x)),
        }
    }

    /// Points where `G` is not differentiable.
    pub fn non_differentiable_points(&self) -> Vec<T> {
        match &self.repr {
            Repr::Composed { .. } => Vec::new(),
            Repr::Direct { kinks, .. } => kinks.clone(),
        }
    }

    /// `true` when `G` is a constant ½.
    pub fn is_null(&self) -> bool {
        self.name == "null"
    }
}

/// The minimal representation `G = G₀*∘w*` with `G₀*` the CDF of
/// `U(−½, ½)` and `w* = G − ½`.
pub fn minimal_representation<T: Real>(g: &PerturbationFn<T>) -> Result<(SymmetricBase<T>, OddFn<T>)> {
    let g0 = SymmetricBase::uniform(lit(0.5))?;
    let gc = g.clone();
    let gd = g.clone();
    let has_density = g.density(T::zero()).is_some();
    let dw: Option<ScalarFn<T>> = if has_density {
        Some(Arc::new(move |x| gd.density(x).unwrap_or(T::zero())))
    } else {
        None
    };
    let w = OddFn::custom(&format!("minimal({})", g.name()), move |x| gc.eval(x) - lit(0.5), dw)?;
    Ok((g0, w))
}

type DensityFn<'a, T> = Arc<dyn Fn(&[T]) -> T + Send + Sync + 'a>;

/// Unique symmetric base and perturbation of a density on `ℝᵈ`.
#[derive(Clone)]
pub struct Decomposition<'a, T> {
    f: DensityFn<'a, T>,
    dim: usize,
}

impl<T> fmt::Debug for Decomposition<'_, T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Decomposition").field("dim", &self.dim).finish()
    }
}

/// Decomposes `f` after checking that it integrates to 1 within 1e-6.
pub fn decompose<'a, T, F>(f: F, dim: usize) -> Result<Decomposition<'a, T>>
where
    T: Real,
    F: Fn(&[T]) -> T + Send + Sync + 'a,
{
    decompose_with_support(f, dim, None)
}

/// As [`decompose`], integrating over `support` (a box) instead of `ℝᵈ`.
pub fn decompose_with_support<'a, T, F>(f: F, dim: usize, support: Option<&[Interval<T>]>) -> Result<Decomposition<'a, T>>
where
    T: Real,
    F: Fn(&[T]) -> T + Send + Sync + 'a,
{
    if !(1..=3).contains(&dim) {
        return Err(Error::BadParam(format!("decompose supports 1 to 3 dimensions, got {dim}")));
    }
    let ranges: Vec<Interval<T>> = match support {
        Some(s) if s.len() != dim => {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: s.len(),
            })
        }
        Some(s) => s.to_vec(),
        None => vec![Interval::real_line(); dim],
    };
    let spec = QuadSpec::default().with_abs_tol(crate::real::tol(1e-9));
    let total = integrate_box(&f, &ranges, &spec)?;
    if !((total - T::one()).abs() <= crate::real::tol(1e-6)) {
        return Err(Error::NotADensity { integral: to_f64(total) });
    }
    Ok(Decomposition { f: Arc::new(f), dim })
}

impl<T: Real> Decomposition<'_, T> {
    pub fn dim(&self) -> usize {
        self.dim
    }

    fn reflect(x: &[T]) -> Vec<T> {
        x.iter().map(|&v| -v).collect()
    }

    /// `f₀(x) = ½{f(x) + f(−x)}`.
    pub fn f0(&self, x: &[T]) -> T {
        lit::<T>(0.5) * ((self.f)(x) + (self.f)(&Self::reflect(x)))
    }

    /// `G(x) = f(x)/(2f₀(x))`, or ½ where `f₀(x) = 0`.
    pub fn g(&self, x: &[T]) -> T {
        let f0 = self.f0(x);
        if f0 > T::zero() {
            (self.f)(x) / (f0 + f0)
        } else {
            lit(0.5)
        }
    }

    /// `true` where `f₀` vanishes and `G` takes its arbitrary branch.
    pub fn is_flagged(&self, x: &[T]) -> bool {
        !(self.f0(x) > T::zero())
    }

    pub fn reconstruct(&self, x: &[T]) -> T {
        let two: T = lit(2.0);
        two * self.f0(x) * self.g(x)
    }
}

impl<T: Real> Decomposition<'static, T> {
    /// For `d = 1`, the recovered `G` as a perturbation function.
    pub fn perturbation(&self) -> Result<PerturbationFn<T>> {
        if self.dim != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: self.dim,
            });
        }
        let me = self.clone();
        PerturbationFn::validate_raw("decomposed", move |x| me.g(&[x]))
    }
}
