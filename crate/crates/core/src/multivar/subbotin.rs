//! Multivariate Subbotin (exponential power) densities
//! `f_ν(x) = c_{ν,d} det(C)^{1/2} exp(−(xᵀCx)^{ν/2}/ν)`, their skewed form
//! `2 f_ν(x) G₀(αᵀx)`, and the product version `∏ c_ν exp(−|x_j|^ν/ν)`.

use crate::bases::SymmetricBase;
use crate::error::{Error, Result};
use crate::numerics::special::ln_gamma;
use crate::numerics::{integrate, Interval, QuadSpec};
use crate::real::{lit, Real};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::linalg::{dot, Cholesky, Matrix};

fn check_nu<T: Real>(nu: T) -> Result<()> {
    if nu > T::zero() && nu.is_finite() {
        Ok(())
    } else {
        Err(Error::BadParam(format!("Subbotin index ν must be positive, got {nu}")))
    }
}

/// `∫_{ℝᵈ} exp(−‖y‖^ν/ν) dy` by radial quadrature.
pub fn subbotin_radial_integral<T: Real>(nu: T, dim: usize) -> Result<T> {
    check_nu(nu)?;
    let dh: T = lit(dim as f64 / 2.0);
    let surface = lit::<T>(2.0) * T::PI().powf(dh) / ln_gamma(dh).exp();
    let d1 = dim as i32 - 1;
    let spec = QuadSpec::new(lit(1e-15), lit(1e-13), 4000)?;
    let r = integrate(
        |r: T| r.powi(d1) * (-r.powf(nu) / nu).exp(),
        Interval::new(T::zero(), T::infinity())?,
        &spec,
    )?;
    Ok(surface * r)
}

/// Closed form `S_d ν^{d/ν−1} Γ(d/ν)` of [`subbotin_radial_integral`].
pub fn subbotin_radial_closed<T: Real>(nu: T, dim: usize) -> T {
    let d: T = lit(dim as f64);
    let dh = d / lit(2.0);
    let surface = lit::<T>(2.0) * T::PI().powf(dh) / ln_gamma(dh).exp();
    surface * nu.powf(d / nu - T::one()) * ln_gamma(d / nu).exp()
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubbotinMv<T> {
    c: Matrix<T>,
    nu: T,
    norm: T,
}

impl<T: Real> SubbotinMv<T> {
    /// `c` must be symmetric positive definite.
    pub fn new(c: Matrix<T>, nu: T) -> Result<Self> {
        check_nu(nu)?;
        let chol = Cholesky::factor(&c)?;
        let norm = chol.det().sqrt() / subbotin_radial_integral(nu, c.dim())?;
        Ok(Self { c, nu, norm })
    }

    pub fn dim(&self) -> usize {
        self.c.dim()
    }

    pub fn nu(&self) -> T {
        self.nu
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.c
    }

    pub fn norm_const(&self) -> T {
        self.norm
    }

    pub fn ln_pdf(&self, x: &[T]) -> T {
        let q = self.c.quad_form(x).max(T::zero());
        self.norm.ln() - q.powf(self.nu / lit(2.0)) / self.nu
    }

    pub fn pdf(&self, x: &[T]) -> T {
        self.ln_pdf(x).exp()
    }
}

/// One-shot `f_ν(x)`.
pub fn subbotin_mv<T: Real>(c: &Matrix<T>, nu: T, x: &[T]) -> Result<T> {
    if x.len() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            found: x.len(),
        });
    }
    Ok(SubbotinMv::new(c.clone(), nu)?.pdf(x))
}

/// `2 f_ν(x) G₀(αᵀx)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Sep<T> {
    base: SubbotinMv<T>,
    alpha: Vec<T>,
    g0: SymmetricBase<T>,
}

impl<T: Real> Sep<T> {
    pub fn new(base: SubbotinMv<T>, alpha: Vec<T>, g0: SymmetricBase<T>) -> Result<Self> {
        if alpha.len() != base.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                found: alpha.len(),
            });
        }
        Ok(Self { base, alpha, g0 })
    }

    /// `G₀` is the univariate Subbotin CDF with the same `ν`.
    pub fn with_subbotin_g0(base: SubbotinMv<T>, alpha: Vec<T>) -> Result<Self> {
        let g0 = SymmetricBase::subbotin(base.nu())?;
        Self::new(base, alpha, g0)
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    pub fn pdf(&self, x: &[T]) -> T {
        lit::<T>(2.0) * self.base.pdf(x) * self.g0.cdf(dot(&self.alpha, x))
    }
}

/// One-shot skewed multivariate Subbotin density.
pub fn sep_density<T: Real>(c: &Matrix<T>, nu: T, alpha: &[T], g0: SymmetricBase<T>, x: &[T]) -> Result<T> {
    if x.len() != c.dim() {
        return Err(Error::DimensionMismatch {
            expected: c.dim(),
            found: x.len(),
        });
    }
    Ok(Sep::new(SubbotinMv::new(c.clone(), nu)?, alpha.to_vec(), g0)?.pdf(x))
}

/// `∏ c_ν exp(−|x_j|^ν/ν)`.
pub fn product_subbotin<T: Real>(nu: T, x: &[T]) -> Result<T> {
    let b = SymmetricBase::subbotin(nu)?;
    Ok(x.iter().map(|&v| b.pdf(v)).fold(T::one(), |a, v| a * v))
}

/// `2 ∏ c_ν exp(−|x_j|^ν/ν) · G₀(αᵀx)`.
pub fn product_subbotin_skewed<T: Real>(nu: T, alpha: &[T], g0: &SymmetricBase<T>, x: &[T]) -> Result<T> {
    if alpha.len() != x.len() {
        return Err(Error::DimensionMismatch {
            expected: x.len(),
            found: alpha.len(),
        });
    }
    Ok(lit::<T>(2.0) * product_subbotin(nu, x)? * g0.cdf(dot(alpha, x)))
}

/// `uᵀMu` with `M = (xᵀCx)C − Cxxᵀ C`, equal to
/// `(xᵀCx)(uᵀCu) − (uᵀCx)²` and nonnegative by Cauchy–Schwarz.
pub fn subbotin_hessian_form<T: Real>(c: &Matrix<T>, x: &[T], u: &[T]) -> T {
    c.quad_form(x) * c.quad_form(u) - c.bilinear(u, x).powi(2)
}

/// Smallest value of [`subbotin_hessian_form`] over `n` seeded random
/// triples `(x, u, C)` with `d ∈ {2, 3}` and `C = AAᵀ + I/10`.
#[derive(Debug, Clone, PartialEq)]
pub struct HessianTrials {
    pub trials: usize,
    pub min_form: f64,
    pub argmin: (Vec<f64>, Vec<f64>),
}

pub fn subbotin_hessian_trials(seed: u64, n: usize) -> HessianTrials {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best = HessianTrials {
        trials: n,
        min_form: f64::INFINITY,
        argmin: (Vec::new(), Vec::new()),
    };
    for trial in 0..n {
        let d = 2 + trial % 2;
        let a: Vec<f64> = (0..d * d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut c = vec![0.0; d * d];
        for i in 0..d {
            for j in 0..d {
                c[i * d + j] = (0..d).map(|k| a[i * d + k] * a[j * d + k]).sum::<f64>() + if i == j { 0.1 } else { 0.0 };
            }
        }
        let c = Matrix::from_vec(d, c).expect("square");
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let u: Vec<f64> = (0..d).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let v = subbotin_hessian_form(&c, &x, &u);
        if v < best.min_form {
            best.min_form = v;
            best.argmin = (x, u);
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::concavity::{check_sconcave, PairConfig};
    use crate::numerics::integrate_box;
    use crate::numerics::special::norm_pdf;
    use approx::{assert_abs_diff_eq, assert_relative_eq};

    #[test]
    fn normalization() {
        for nu in [0.7, 1.0, 1.5, 2.0, 3.0] {
            for d in 1..=3 {
                assert_relative_eq!(
                    subbotin_radial_integral(nu, d).unwrap(),
                    subbotin_radial_closed(nu, d),
                    max_relative = 1e-10
                );
            }
        }
        let c = Matrix::from_rows(&[vec![1.5, 0.4], vec![0.4, 0.8]]).unwrap();
        let f = SubbotinMv::new(c, 1.5).unwrap();
        let spec = QuadSpec::new(1e-10, 1e-9, 4000).unwrap();
        let total = integrate_box(&|x: &[f64]| f.pdf(x), &[Interval::real_line(), Interval::real_line()], &spec).unwrap();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-6);
    }

    #[test]
    fn reductions() {
        let i2 = Matrix::identity(2);
        for x in [[0.0, 0.0], [0.5, -1.2], [2.0, 1.0]] {
            assert_abs_diff_eq!(subbotin_mv(&i2, 2.0, &x).unwrap(), norm_pdf(x[0]) * norm_pdf(x[1]), epsilon = 1e-10);
            assert_abs_diff_eq!(product_subbotin(2.0, &x).unwrap(), norm_pdf(x[0]) * norm_pdf(x[1]), epsilon = 1e-14);
            let g0 = SymmetricBase::subbotin(1.5).unwrap();
            assert_abs_diff_eq!(
                sep_density(&i2, 1.5, &[0.0, 0.0], g0, &x).unwrap(),
                subbotin_mv(&i2, 1.5, &x).unwrap(),
                epsilon = 1e-15
            );
        }
        let b = SymmetricBase::subbotin(1.3).unwrap();
        for x in [-1.0, 0.2, 2.5] {
            assert_abs_diff_eq!(product_subbotin(1.3, &[x]).unwrap(), b.pdf(x), epsilon = 1e-15);
            assert_relative_eq!(subbotin_mv(&Matrix::identity(1), 1.3, &[x]).unwrap(), b.pdf(x), max_relative = 1e-10);
        }
        assert!(SubbotinMv::new(Matrix::identity(2), 0.0).is_err());
        assert!(SubbotinMv::new(Matrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 1.0]]).unwrap(), 1.0).is_err());
    }

    #[test]
    fn hessian_form_nonnegative() {
        let t = subbotin_hessian_trials(11, 1000);
        assert_eq!(t.trials, 1000);
        assert!(t.min_form >= -1e-12, "{t:?}");
        let c = Matrix::from_rows(&[vec![2.0, 0.5], vec![0.5, 1.0]]).unwrap();
        let x: [f64; 2] = [0.3, -1.1];
        assert!(subbotin_hessian_form(&c, &x, &x).abs() <= 1e-12);
        // xᵀCx = 1.06, uᵀCu = 2, uᵀCx = 0.05
        assert_abs_diff_eq!(subbotin_hessian_form(&c, &x, &[1.0, 0.0]), 2.1175, epsilon = 1e-14);
    }

    #[test]
    fn skewed_laws_are_log_concave() {
        let dom = vec![Interval::new(-4.0, 4.0).unwrap(); 2];
        let cfg = PairConfig {
            n_pairs: 2000,
            ..PairConfig::default()
        };
        for nu in [1.0, 1.5] {
            let sep = Sep::with_subbotin_g0(SubbotinMv::new(Matrix::identity(2), nu).unwrap(), vec![1.0, -1.0]).unwrap();
            assert!(check_sconcave(&|x: &[f64]| sep.pdf(x), 0.0, &dom, &cfg).unwrap().pass);
        }
        let g0 = SymmetricBase::subbotin(1.5).unwrap();
        let r = check_sconcave(&|x: &[f64]| product_subbotin_skewed(1.5, &[1.0, -1.0], &g0, x).unwrap(), 0.0, &dom, &cfg).unwrap();
        assert!(r.pass && r.strict_observed, "{r:?}");
    }
}
