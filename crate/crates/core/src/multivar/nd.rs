//! Skew-symmetric laws `2 f₀(x) G₀(αᵀx)` on `ℝᵈ` with a normal or
//! product-Subbotin base, exposing the [`Law`] interface.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bases::SymmetricBase;
use crate::characterize::Law;
use crate::error::{Error, Result};
use crate::real::{lit, Real};

use super::linalg::{dot, Cholesky, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub enum NdBase<T> {
    /// `N_d(0, Ω)`.
    Normal { chol: Cholesky<T> },
    /// Independent Subbotin(ν) coordinates.
    ProductSubbotin { base: SymmetricBase<T>, dim: usize },
}

impl<T: Real> NdBase<T> {
    pub fn normal(omega: &Matrix<T>) -> Result<Self> {
        Ok(Self::Normal {
            chol: Cholesky::factor(omega)?,
        })
    }

    pub fn product_subbotin(nu: T, dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::BadParam("dimension must be positive".into()));
        }
        Ok(Self::ProductSubbotin {
            base: SymmetricBase::subbotin(nu)?,
            dim,
        })
    }

    pub fn dim(&self) -> usize {
        match self {
            Self::Normal { chol } => chol.dim(),
            Self::ProductSubbotin { dim, .. } => *dim,
        }
    }

    pub fn pdf(&self, x: &[T]) -> T {
        match self {
            Self::Normal { chol } => {
                let dh: T = lit(x.len() as f64 / 2.0);
                (-chol.inv_quad_form(x) / lit(2.0) - dh * (T::PI() + T::PI()).ln() - chol.ln_det() / lit(2.0)).exp()
            }
            Self::ProductSubbotin { base, .. } => x.iter().map(|&v| base.pdf(v)).fold(T::one(), |a, v| a * v),
        }
    }

    fn draw(&self, rng: &mut ChaCha8Rng) -> Vec<T> {
        let d = self.dim();
        match self {
            Self::Normal { chol } => {
                let n = SymmetricBase::<T>::normal();
                let z: Vec<T> = (0..d).map(|_| n.draw(lit(rng.gen::<f64>()))).collect();
                chol.l_mul(&z)
            }
            Self::ProductSubbotin { base, .. } => (0..d).map(|_| base.draw(lit(rng.gen::<f64>()))).collect(),
        }
    }

    fn name(&self) -> String {
        match self {
            Self::Normal { .. } => format!("normal{}", self.dim()),
            Self::ProductSubbotin { base, dim } => format!("{}^{}", base.name(), dim),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkewSymmetricNd<T> {
    base: NdBase<T>,
    g0: SymmetricBase<T>,
    alpha: Vec<T>,
}

impl<T: Real> SkewSymmetricNd<T> {
    pub fn new(base: NdBase<T>, g0: SymmetricBase<T>, alpha: Vec<T>) -> Result<Self> {
        if alpha.len() != base.dim() {
            return Err(Error::DimensionMismatch {
                expected: base.dim(),
                found: alpha.len(),
            });
        }
        Ok(Self { base, g0, alpha })
    }

    pub fn base(&self) -> &NdBase<T> {
        &self.base
    }

    pub fn alpha(&self) -> &[T] {
        &self.alpha
    }

    pub fn pdf(&self, x: &[T]) -> T {
        lit::<T>(2.0) * self.base.pdf(x) * self.g0.cdf(dot(&self.alpha, x))
    }
}

impl<T: Real> Law<T> for SkewSymmetricNd<T> {
    fn dim(&self) -> usize {
        self.base.dim()
    }

    fn density(&self, x: &[T]) -> T {
        self.pdf(x)
    }

    /// Draws `X₀` from the base and keeps it with probability `G(X₀)`,
    /// reflecting it otherwise.
    fn sample(&self, n: usize, seed: u64) -> Vec<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Vec::with_capacity(n * self.dim());
        for _ in 0..n {
            let x = self.base.draw(&mut rng);
            let v: T = lit(rng.gen::<f64>());
            if v <= self.g0.cdf(dot(&self.alpha, &x)) {
                out.extend(x);
            } else {
                out.extend(x.into_iter().map(|t| -t));
            }
        }
        out
    }

    fn has_abs_moment(&self, _k: T) -> bool {
        true
    }

    fn name(&self) -> String {
        let a: Vec<String> = self.alpha.iter().map(|v| format!("{v}")).collect();
        format!("{}/{}({})", self.base.name(), self.g0.name(), a.join(","))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::characterize::{check_common_base, CharConfig};
    use crate::numerics::{integrate_box, Interval, QuadSpec};
    use approx::assert_abs_diff_eq;

    fn omega() -> Matrix<f64> {
        Matrix::from_rows(&[vec![1.0, 0.3], vec![0.3, 1.0]]).unwrap()
    }

    #[test]
    fn normalized_and_sampled_mean() {
        let law = SkewSymmetricNd::new(NdBase::normal(&omega()).unwrap(), SymmetricBase::normal(), vec![2.0, -1.0]).unwrap();
        let spec = QuadSpec::new(1e-9, 1e-8, 4000).unwrap();
        let total = integrate_box(&|x: &[f64]| law.pdf(x), &[Interval::real_line(), Interval::real_line()], &spec).unwrap();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-6);
        // E X = √(2/π) Ωα / √(1 + αᵀΩα)
        let a = [2.0, -1.0];
        let om = omega();
        let oa = om.mul_vec(&a);
        let s = (1.0 + om.quad_form(&a)).sqrt();
        let n = 100_000;
        let xs = law.sample(n, 5);
        for (k, &oak) in oa.iter().enumerate() {
            let mean = xs.iter().skip(k).step_by(2).sum::<f64>() / n as f64;
            let want = (2.0 / std::f64::consts::PI).sqrt() * oak / s;
            assert!((mean - want).abs() < 0.01, "{k}: {mean} vs {want}");
        }
        assert_eq!(law.sample(10, 3), law.sample(10, 3));
    }

    #[test]
    fn bivariate_characterization() {
        let cfg = CharConfig {
            n_mc: 20_000,
            ..CharConfig::default()
        };
        let base = NdBase::product_subbotin(1.5, 2).unwrap();
        let f = SkewSymmetricNd::new(base.clone(), SymmetricBase::normal(), vec![1.0, 2.0]).unwrap();
        let h = SkewSymmetricNd::new(base, SymmetricBase::logistic(), vec![-0.5, 0.3]).unwrap();
        let r = check_common_base(&f, &h, &cfg).unwrap();
        assert!(r.all_pass(), "{r:?}");
        let other = SkewSymmetricNd::new(NdBase::normal(&omega()).unwrap(), SymmetricBase::normal(), vec![1.0, 2.0]).unwrap();
        let r = check_common_base(&f, &other, &cfg).unwrap();
        assert!(r.all_fail(), "{r:?}");
    }
}
