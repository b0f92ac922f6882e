//! Elliptical laws `f_U(y) = k f̃(yᵀΩ⁻¹y)` given by a density generator `f̃`.

use crate::error::{Error, Result};
use crate::numerics::special::ln_gamma;
use crate::numerics::{integrate_pieces, Interval, QuadSpec};
use crate::perturb::TriState;
use crate::real::{lit, Real};

use super::linalg::{Cholesky, Matrix};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GeneratorKind<T> {
    /// `exp(−x/2)`.
    Normal,
    /// `(1 − x)^ν` on `(0, 1)`.
    PearsonII { nu: T },
    /// `(1 + x/ν)^{−M}`.
    PearsonVII { m: T, nu: T },
    /// `I(0,1) + I(0,16)`.
    TwoDisc,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EllipticalGenerator<T> {
    kind: GeneratorKind<T>,
}

impl<T: Real> EllipticalGenerator<T> {
    pub fn normal() -> Self {
        Self { kind: GeneratorKind::Normal }
    }

    pub fn pearson2(nu: T) -> Result<Self> {
        if !(nu >= T::zero()) || !nu.is_finite() {
            return Err(Error::BadParam(format!("Pearson II needs ν ≥ 0, got {nu}")));
        }
        Ok(Self {
            kind: GeneratorKind::PearsonII { nu },
        })
    }

    pub fn pearson7(m: T, nu: T) -> Result<Self> {
        if !(m > T::zero() && nu > T::zero()) || !m.is_finite() || !nu.is_finite() {
            return Err(Error::BadParam(format!("Pearson VII needs M, ν > 0, got M = {m}, ν = {nu}")));
        }
        Ok(Self {
            kind: GeneratorKind::PearsonVII { m, nu },
        })
    }

    /// Pearson VII generator of the `dim`-variate Student t with `nu`
    /// degrees of freedom, `M = (dim + ν)/2`.
    pub fn student(nu: T, dim: usize) -> Result<Self> {
        Self::pearson7((lit::<T>(dim as f64) + nu) / lit(2.0), nu)
    }

    pub fn two_disc() -> Self {
        Self {
            kind: GeneratorKind::TwoDisc,
        }
    }

    pub fn kind(&self) -> GeneratorKind<T> {
        self.kind
    }

    pub fn name(&self) -> String {
        match self.kind {
            GeneratorKind::Normal => "normal".into(),
            GeneratorKind::PearsonII { nu } => format!("pearson2({nu})"),
            GeneratorKind::PearsonVII { m, nu } => format!("pearson7({m},{nu})"),
            GeneratorKind::TwoDisc => "two_disc".into(),
        }
    }

    /// `f̃(x)` for `x ≥ 0`.
    pub fn eval(&self, x: T) -> T {
        let one = T::one();
        match self.kind {
            GeneratorKind::Normal => (-x / lit(2.0)).exp(),
            GeneratorKind::PearsonII { nu } => {
                if x < one {
                    (one - x).powf(nu)
                } else {
                    T::zero()
                }
            }
            GeneratorKind::PearsonVII { m, nu } => (one + x / nu).powf(-m),
            GeneratorKind::TwoDisc => {
                let a = if x < one { one } else { T::zero() };
                let b = if x < lit(16.0) { one } else { T::zero() };
                a + b
            }
        }
    }

    /// Range of the quadratic form where `f̃ > 0`.
    pub fn support(&self) -> Interval<T> {
        let hi = match self.kind {
            GeneratorKind::PearsonII { .. } => T::one(),
            GeneratorKind::TwoDisc => lit(16.0),
            _ => T::infinity(),
        };
        Interval::new(T::zero(), hi).expect("positive width")
    }

    /// Values of the quadratic form where `f̃` jumps or its support ends.
    pub fn cutoffs(&self) -> Vec<T> {
        match self.kind {
            GeneratorKind::PearsonII { .. } => vec![T::one()],
            GeneratorKind::TwoDisc => vec![T::one(), lit(16.0)],
            _ => Vec::new(),
        }
    }

    /// All four families are nonincreasing.
    pub fn nonincreasing(&self) -> TriState {
        TriState::Yes
    }

    /// Largest `s` for which every elliptical density with this generator is
    /// s-concave: `f̃^s` must be convex (s < 0) or concave (s > 0) in the
    /// radius. The two-disc generator is not s-concave for any `s`.
    pub fn s_concavity(&self) -> Option<f64> {
        match self.kind {
            GeneratorKind::Normal => Some(0.0),
            GeneratorKind::PearsonII { nu } if nu > T::zero() => Some(1.0 / nu.to_f64().expect("finite")),
            GeneratorKind::PearsonII { .. } => Some(f64::INFINITY),
            GeneratorKind::PearsonVII { m, .. } => Some(-1.0 / m.to_f64().expect("finite")),
            GeneratorKind::TwoDisc => None,
        }
    }

    /// Whether `x^{d/2−1} f̃(x)` is integrable on `(0, ∞)`.
    pub fn integrable(&self, dim: usize) -> bool {
        match self.kind {
            GeneratorKind::PearsonVII { m, .. } => m > lit(dim as f64 / 2.0),
            _ => true,
        }
    }

    /// `∫_{ℝᵈ} f̃(‖y‖²) dy` by radial quadrature.
    pub fn radial_integral(&self, dim: usize, spec: &QuadSpec<T>) -> Result<T> {
        if !self.integrable(dim) {
            return Err(Error::BadParam(format!("generator {} not integrable in dimension {dim}", self.name())));
        }
        let dh: T = lit(dim as f64 / 2.0);
        let surface = lit::<T>(2.0) * T::PI().powf(dh) / ln_gamma(dh).exp();
        let breaks: Vec<T> = self.cutoffs().iter().map(|c| c.sqrt()).collect();
        let d1 = dim as i32 - 1;
        let r = integrate_pieces(
            |r: T| r.powi(d1) * self.eval(r * r),
            Interval::new(T::zero(), T::infinity())?,
            &breaks,
            spec,
        )?;
        Ok(surface * r)
    }

    /// Closed form of [`Self::radial_integral`].
    pub fn radial_integral_closed(&self, dim: usize) -> T {
        let dh: T = lit(dim as f64 / 2.0);
        let pi = T::PI();
        let one = T::one();
        match self.kind {
            GeneratorKind::Normal => (pi + pi).powf(dh),
            GeneratorKind::PearsonII { nu } => pi.powf(dh) * (ln_gamma(nu + one) - ln_gamma(nu + one + dh)).exp(),
            GeneratorKind::PearsonVII { m, nu } => (nu * pi).powf(dh) * (ln_gamma(m - dh) - ln_gamma(m)).exp(),
            GeneratorKind::TwoDisc => pi.powf(dh) / (ln_gamma(dh + one)).exp() * (one + lit::<T>(4.0).powi(dim as i32)),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EllipticalDensity<T> {
    generator: EllipticalGenerator<T>,
    omega: Matrix<T>,
    chol: Cholesky<T>,
    k: T,
}

impl<T: Real> EllipticalDensity<T> {
    pub fn new(generator: EllipticalGenerator<T>, omega: Matrix<T>) -> Result<Self> {
        let chol = Cholesky::factor(&omega)?;
        let d = omega.dim();
        let spec = QuadSpec::new(lit(1e-14), lit(1e-12), 4000)?;
        let radial = match generator.kind {
            GeneratorKind::Normal => generator.radial_integral_closed(d),
            _ => generator.radial_integral(d, &spec)?,
        };
        let k = (chol.det().sqrt() * radial).recip();
        Ok(Self { generator, omega, chol, k })
    }

    pub fn generator(&self) -> &EllipticalGenerator<T> {
        &self.generator
    }

    pub fn omega(&self) -> &Matrix<T> {
        &self.omega
    }

    pub fn cholesky(&self) -> &Cholesky<T> {
        &self.chol
    }

    pub fn dim(&self) -> usize {
        self.omega.dim()
    }

    pub fn norm_const(&self) -> T {
        self.k
    }

    pub fn pdf(&self, y: &[T]) -> T {
        self.k * self.generator.eval(self.chol.inv_quad_form(y))
    }
}
