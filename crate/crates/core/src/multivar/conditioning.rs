//! Skew-elliptical laws generated by conditioning: `Z = U₁ | U₀ > 0` for a
//! `(d+1)`-variate elliptical `U = (U₀, U₁)` with scale matrix
//! `Ω₊ = (1 δᵀ; δ Ω)`, so that
//! `f_Z(y) = 2 ∫₀^∞ k₁ f̃(uᵀΩ₊⁻¹u) du₀` with `u = (u₀, y)`.

use crate::error::{Error, Result};
use crate::numerics::{integrate_pieces, Interval, QuadSpec};
use crate::real::{lit, to_f64, Real};

use super::elliptical::EllipticalGenerator;
use super::linalg::{Cholesky, Matrix};

/// Tolerance on `G(y) + G(−y) = 1` in [`SkewElliptical::check_representation`].
pub const REPRESENTATION_TOL: f64 = 1e-8;
/// Marginal density values below this make `G` undefined.
pub const DEGENERATE_DENSITY: f64 = 1e-300;

#[derive(Debug, Clone, PartialEq)]
pub struct ConditioningSpec<T> {
    omega_plus: Matrix<T>,
    chol: Cholesky<T>,
}

impl<T: Real> ConditioningSpec<T> {
    /// `omega_plus` must be positive definite with unit diagonal.
    pub fn new(omega_plus: Matrix<T>) -> Result<Self> {
        let n = omega_plus.dim();
        if !(2..=4).contains(&n) {
            return Err(Error::BadParam(format!("Ω₊ must be (d+1)×(d+1) with 1 ≤ d ≤ 3, got {n}×{n}")));
        }
        if (0..n).any(|i| (omega_plus.get(i, i) - T::one()).abs() > lit(1e-12)) {
            return Err(Error::BadParam("Ω₊ must have unit diagonal".into()));
        }
        let chol = Cholesky::factor(&omega_plus)?;
        Ok(Self { omega_plus, chol })
    }

    /// Assembles `Ω₊` from `δ` and a correlation matrix `Ω`.
    pub fn from_parts(delta: &[T], omega: &Matrix<T>) -> Result<Self> {
        let d = omega.dim();
        if delta.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: delta.len(),
            });
        }
        let n = d + 1;
        let mut data = vec![T::zero(); n * n];
        data[0] = T::one();
        for i in 0..d {
            data[i + 1] = delta[i];
            data[(i + 1) * n] = delta[i];
            for j in 0..d {
                data[(i + 1) * n + j + 1] = omega.get(i, j);
            }
        }
        Self::new(Matrix::from_vec(n, data)?)
    }

    /// Scalar case `d = 1`, `Ω = 1`.
    pub fn univariate(delta: T) -> Result<Self> {
        Self::from_parts(&[delta], &Matrix::identity(1))
    }

    pub fn dim(&self) -> usize {
        self.omega_plus.dim() - 1
    }

    pub fn omega_plus(&self) -> &Matrix<T> {
        &self.omega_plus
    }

    pub fn delta(&self) -> Vec<T> {
        (1..=self.dim()).map(|i| self.omega_plus.get(0, i)).collect()
    }

    pub fn omega(&self) -> Matrix<T> {
        self.omega_plus.submatrix(&(1..=self.dim()).collect::<Vec<_>>())
    }

    /// Slant `α = Ω⁻¹δ / (1 − δᵀΩ⁻¹δ)^{1/2}`.
    pub fn alpha(&self) -> Result<Vec<T>> {
        let c = Cholesky::factor(&self.omega())?;
        let delta = self.delta();
        let od = c.solve(&delta);
        let denom = (T::one() - c.inv_quad_form(&delta)).sqrt();
        Ok(od.into_iter().map(|v| v / denom).collect())
    }
}

/// Density of `Z = U₁ | U₀ > 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewElliptical<T> {
    generator: EllipticalGenerator<T>,
    spec: ConditioningSpec<T>,
    precision: Matrix<T>,
    k1: T,
    quad: QuadSpec<T>,
}

impl<T: Real> SkewElliptical<T> {
    pub fn new(generator: EllipticalGenerator<T>, spec: ConditioningSpec<T>) -> Result<Self> {
        Self::with_quad(generator, spec, QuadSpec::new(lit(1e-14), lit(1e-12), 4000)?)
    }

    pub fn with_quad(generator: EllipticalGenerator<T>, spec: ConditioningSpec<T>, quad: QuadSpec<T>) -> Result<Self> {
        let n = spec.dim() + 1;
        let radial = generator.radial_integral(n, &quad)?;
        let k1 = (spec.chol.det().sqrt() * radial).recip();
        let precision = spec.chol.inverse();
        Ok(Self {
            generator,
            spec,
            precision,
            k1,
            quad,
        })
    }

    pub fn dim(&self) -> usize {
        self.spec.dim()
    }

    pub fn generator(&self) -> &EllipticalGenerator<T> {
        &self.generator
    }

    pub fn spec(&self) -> &ConditioningSpec<T> {
        &self.spec
    }

    /// Normalizing constant `k₁` of the `(d+1)`-variate law of `U`.
    pub fn k1(&self) -> T {
        self.k1
    }

    /// Coefficients of `q(u₀) = a u₀² + 2b u₀ + c`.
    fn quadratic(&self, y: &[T]) -> (T, T, T) {
        let p = &self.precision;
        let d = self.dim();
        let a = p.get(0, 0);
        let b = (0..d).map(|j| p.get(0, j + 1) * y[j]).sum();
        let c = (0..d)
            .flat_map(|i| (0..d).map(move |j| (i, j)))
            .map(|(i, j)| p.get(i + 1, j + 1) * y[i] * y[j])
            .sum();
        (a, b, c)
    }

    /// `∫ k₁ f̃(q(u₀)) du₀` over `iv`, split where `q` crosses a cutoff.
    fn integrate_u0(&self, y: &[T], iv: Interval<T>) -> Result<T> {
        if y.len() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: y.len(),
            });
        }
        let (a, b, c) = self.quadratic(y);
        let mut breaks = Vec::new();
        for t in self.generator.cutoffs() {
            let disc = b * b - a * (c - t);
            if disc > T::zero() {
                let s = disc.sqrt();
                breaks.push((-b - s) / a);
                breaks.push((-b + s) / a);
            }
        }
        breaks.sort_by(|p, q| p.partial_cmp(q).expect("finite"));
        let g = &self.generator;
        let two: T = lit(2.0);
        let v = integrate_pieces(|u: T| g.eval((a * u * u + two * b * u + c).max(T::zero())), iv, &breaks, &self.quad)?;
        Ok(self.k1 * v)
    }

    /// `f_Z(y)`.
    pub fn density(&self, y: &[T]) -> Result<T> {
        let half = self.integrate_u0(y, Interval::new(T::zero(), T::infinity())?)?;
        Ok(half + half)
    }

    /// Density of `U₁`, the symmetric base of `Z`.
    pub fn base_density(&self, y: &[T]) -> Result<T> {
        self.integrate_u0(y, Interval::real_line())
    }

    /// `G(y) = f_Z(y) / (2 f₀(y))`.
    pub fn perturbation(&self, y: &[T]) -> Result<T> {
        let f0 = self.base_density(y)?;
        if !(to_f64(f0) > DEGENERATE_DENSITY) {
            return Err(Error::DegenerateBase { density: to_f64(f0) });
        }
        Ok(self.integrate_u0(y, Interval::new(T::zero(), T::infinity())?)? / f0)
    }

    /// Checks `G(y) + G(−y) = 1`; returns the residual.
    pub fn check_representation(&self, y: &[T]) -> Result<T> {
        let neg: Vec<T> = y.iter().map(|&v| -v).collect();
        let sum = self.perturbation(y)? + self.perturbation(&neg)?;
        let residual = (sum - T::one()).abs();
        if residual > lit(REPRESENTATION_TOL) {
            return Err(Error::RepresentationViolated {
                at: y.iter().map(|&v| to_f64(v)).collect(),
                sum: to_f64(sum),
            });
        }
        Ok(residual)
    }
}

/// One-shot evaluation of `f_Z(y)`.
pub fn skew_by_conditioning<T: Real>(generator: &EllipticalGenerator<T>, spec: &ConditioningSpec<T>, y: &[T]) -> Result<T> {
    SkewElliptical::new(*generator, spec.clone())?.density(y)
}

/// One-shot evaluation of the perturbation `G(y) = f_Z(y)/(2 f₀(y))`.
pub fn branco_dey_g<T: Real>(generator: &EllipticalGenerator<T>, spec: &ConditioningSpec<T>, y: &[T]) -> Result<T> {
    SkewElliptical::new(*generator, spec.clone())?.perturbation(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::special::{norm_cdf, norm_pdf};
    use crate::numerics::{integrate, integrate_box};
    use approx::assert_abs_diff_eq;

    #[test]
    fn normal_generator_gives_skew_normal() {
        for delta in [-0.9, -0.3, 0.0, 0.5, 0.95] {
            let spec = ConditioningSpec::univariate(delta).unwrap();
            let alpha = spec.alpha().unwrap()[0];
            assert_abs_diff_eq!(alpha, delta / (1.0f64 - delta * delta).sqrt(), epsilon = 1e-14);
            let z = SkewElliptical::new(EllipticalGenerator::normal(), spec).unwrap();
            for y in [-3.0, -1.0, -0.2, 0.0, 0.4, 1.5, 4.0] {
                assert_abs_diff_eq!(z.density(&[y]).unwrap(), 2.0 * norm_pdf(y) * norm_cdf(alpha * y), epsilon = 1e-7);
                assert_abs_diff_eq!(z.perturbation(&[y]).unwrap(), norm_cdf(alpha * y), epsilon = 1e-7);
            }
            assert_abs_diff_eq!(z.perturbation(&[0.0]).unwrap(), 0.5, epsilon = 1e-12);
        }
    }

    #[test]
    fn zero_delta_gives_symmetric_marginal() {
        let spec = ConditioningSpec::univariate(0.0).unwrap();
        let z = SkewElliptical::new(EllipticalGenerator::student(3.0, 2).unwrap(), spec).unwrap();
        for y in [0.3, 1.0, 2.5] {
            assert_abs_diff_eq!(z.density(&[y]).unwrap(), z.density(&[-y]).unwrap(), epsilon = 1e-12);
            assert_abs_diff_eq!(z.density(&[y]).unwrap(), z.base_density(&[y]).unwrap(), epsilon = 1e-12);
        }
    }

    #[test]
    fn normalization_and_representation() {
        let omega = Matrix::from_rows(&[vec![1.0, 0.2], vec![0.2, 1.0]]).unwrap();
        let spec = ConditioningSpec::from_parts(&[0.5, -0.3], &omega).unwrap();
        for g in [
            EllipticalGenerator::normal(),
            EllipticalGenerator::pearson2(2.0).unwrap(),
            EllipticalGenerator::student(3.0, 3).unwrap(),
        ] {
            let z = SkewElliptical::new(g, spec.clone()).unwrap();
            for y in [[0.3, -0.4], [0.5, 0.2], [-0.5, -0.3]] {
                assert!(z.check_representation(&y).unwrap() <= REPRESENTATION_TOL);
            }
        }
        let z = SkewElliptical::new(EllipticalGenerator::normal(), spec).unwrap();
        let spec2 = QuadSpec::new(1e-9, 1e-8, 2000).unwrap();
        let total = integrate_box(
            &|y: &[f64]| z.density(y).unwrap(),
            &[Interval::real_line(), Interval::real_line()],
            &spec2,
        )
        .unwrap();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-6);
        let pearson = ConditioningSpec::univariate(0.6).unwrap();
        let z = SkewElliptical::new(EllipticalGenerator::pearson2(2.0).unwrap(), pearson).unwrap();
        let total = integrate(|y: f64| z.density(&[y]).unwrap(), Interval::new(-1.0, 1.0).unwrap(), &spec2).unwrap();
        assert_abs_diff_eq!(total, 1.0, epsilon = 1e-6);
        assert!(matches!(z.perturbation(&[1.5]), Err(Error::DegenerateBase { .. })));
    }

    #[test]
    fn radial_invariance_of_g() {
        // Pearson VII, d = 2: G depends on y only through αᵀy and yᵀΩ⁻¹y.
        let spec = ConditioningSpec::from_parts(&[0.6, 0.0], &Matrix::identity(2)).unwrap();
        let z = SkewElliptical::new(EllipticalGenerator::student(3.0, 3).unwrap(), spec).unwrap();
        for (r, t) in [(1.0f64, 0.5f64), (2.0, 1.2), (0.7, -0.3)] {
            let x = r * t.cos();
            let h = r * t.sin();
            let a = z.perturbation(&[x, h]).unwrap();
            let b = z.perturbation(&[x, -h]).unwrap();
            assert_abs_diff_eq!(a, b, epsilon = 1e-10);
        }
        let spec = ConditioningSpec::from_parts(&[0.5, 0.5], &Matrix::identity(2)).unwrap();
        let z = SkewElliptical::new(EllipticalGenerator::student(3.0, 3).unwrap(), spec).unwrap();
        // reflection across the α direction keeps αᵀy and ‖y‖
        assert_abs_diff_eq!(
            z.perturbation(&[1.3, 0.2]).unwrap(),
            z.perturbation(&[0.2, 1.3]).unwrap(),
            epsilon = 1e-10
        );
    }

    #[test]
    fn rejects_bad_matrices() {
        let bad = Matrix::from_rows(&[vec![1.0, 1.2], vec![1.2, 1.0]]).unwrap();
        assert!(ConditioningSpec::new(bad).is_err());
        let nonunit = Matrix::from_rows(&[vec![2.0, 0.1], vec![0.1, 1.0]]).unwrap();
        assert!(ConditioningSpec::new(nonunit).is_err());
    }
}
