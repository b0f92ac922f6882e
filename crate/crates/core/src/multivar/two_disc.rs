//! Bivariate elliptical law with generator `I(0,1) + I(0,16)` conditioned on
//! `U₀ > 0` with `δ = ½`. The marginal `f_Z(y) = k{f₁(y) + f₄(y)}` has a
//! global maximum near `0.699` and a second local maximum at `y = 2`, so
//! `Z` is not quasi-concave although `U` is c-unimodal.

use crate::error::Result;
use crate::numerics::optim::find_local_maxima;
use crate::numerics::Interval;
use crate::real::{lit, Real};

use super::conditioning::ConditioningSpec;

/// `k = 1/(A₁ + A₄) = 2/(17π√3)` with `A_j = π√3 j²/2`.
pub fn two_disc_k<T: Real>() -> T {
    lit::<T>(2.0) / (lit::<T>(17.0) * T::PI() * lit::<T>(3.0).sqrt())
}

/// Area `A_j = π√3 j²/2` of `{u : uᵀΩ₊⁻¹u < j²}`.
pub fn two_disc_area<T: Real>(j: T) -> T {
    T::PI() * lit::<T>(3.0).sqrt() * j * j / lit(2.0)
}

/// `f_j(y)`: `y + √(3(j²−y²))` for `|y| ≤ √3j/2`, `2√(3(j²−y²))` for
/// `√3j/2 ≤ y ≤ j`, zero otherwise.
pub fn two_disc_branch<T: Real>(j: T, y: T) -> T {
    let three: T = lit(3.0);
    let cut = three.sqrt() * j / lit(2.0);
    if y.abs() <= cut {
        y + (three * (j * j - y * y)).max(T::zero()).sqrt()
    } else if y > cut && y <= j {
        lit::<T>(2.0) * (three * (j * j - y * y)).max(T::zero()).sqrt()
    } else {
        T::zero()
    }
}

/// Closed form `f_Z(y) = k{f₁(y) + f₄(y)}`, supported on `[−2√3, 4]`.
pub fn two_disc_counterexample<T: Real>(y: T) -> T {
    two_disc_k::<T>() * (two_disc_branch(T::one(), y) + two_disc_branch(lit(4.0), y))
}

/// `Ω₊ = (1 ½; ½ 1)`.
pub fn two_disc_spec<T: Real>() -> Result<ConditioningSpec<T>> {
    ConditioningSpec::univariate(lit(0.5))
}

/// Local maxima of the closed form on `[−4, 4]`.
pub fn two_disc_local_maxima<T: Real>() -> Vec<T> {
    find_local_maxima(two_disc_counterexample::<T>, Interval::new(lit(-4.0), lit(4.0)).expect("valid"), 8000)
}

/// Level inside `(f_Z(1), f_Z(2))`, where `{f_Z ≥ u}` splits into two
/// intervals.
pub fn two_disc_nonconvex_level<T: Real>() -> T {
    (two_disc_counterexample::<T>(T::one()) + two_disc_counterexample::<T>(lit(2.0))) / lit(2.0)
}
