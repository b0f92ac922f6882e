//! Extended skew-normal density
//! `φ_d(x; Ω) Φ(α₀ + αᵀx) / Φ(τ)` with `α₀ = τ(1 + αᵀΩα)^{1/2}`.

use crate::error::{Error, Result};
use crate::numerics::special::norm_cdf;
use crate::real::{lit, Real};

use super::linalg::{dot, Cholesky, Matrix};

#[derive(Debug, Clone, PartialEq)]
pub struct Esn<T> {
    chol: Cholesky<T>,
    alpha: Vec<T>,
    tau: T,
    alpha0: T,
    ln_norm: T,
}

impl<T: Real> Esn<T> {
    pub fn new(omega: &Matrix<T>, alpha: Vec<T>, tau: T) -> Result<Self> {
        let d = omega.dim();
        if alpha.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: alpha.len(),
            });
        }
        if !tau.is_finite() {
            return Err(Error::BadParam(format!("τ must be finite, got {tau}")));
        }
        let chol = Cholesky::factor(omega)?;
        let alpha0 = tau * (T::one() + omega.quad_form(&alpha)).sqrt();
        let dh: T = lit(d as f64 / 2.0);
        let ln_norm = -(dh * (T::PI() + T::PI()).ln() + chol.ln_det() / lit(2.0)) - norm_cdf(tau).ln();
        Ok(Self {
            chol,
            alpha,
            tau,
            alpha0,
            ln_norm,
        })
    }

    pub fn dim(&self) -> usize {
        self.alpha.len()
    }

    pub fn tau(&self) -> T {
        self.tau
    }

    pub fn alpha0(&self) -> T {
        self.alpha0
    }

    pub fn pdf(&self, x: &[T]) -> T {
        let q = self.chol.inv_quad_form(x);
        (self.ln_norm - q / lit(2.0)).exp() * norm_cdf(self.alpha0 + dot(&self.alpha, x))
    }
}

/// One-shot evaluation.
pub fn esn_density<T: Real>(omega: &Matrix<T>, alpha: &[T], tau: T, x: &[T]) -> Result<T> {
    if x.len() != omega.dim() {
        return Err(Error::DimensionMismatch {
            expected: omega.dim(),
            found: x.len(),
        });
    }
    Ok(Esn::new(omega, alpha.to_vec(), tau)?.pdf(x))
}
