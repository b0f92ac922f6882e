//! Finite-difference derivatives with steps scaled to the argument.

use crate::real::{lit, Real};

fn scale<T: Real>(x: T) -> T {
    x.abs().max(T::one())
}

/// Step used by [`central`]: `eps^{1/3} · max(1, |x|)`.
pub fn central_step<T: Real>(x: T) -> T {
    T::epsilon().cbrt() * scale(x)
}

/// Central first difference `(f(x+h) − f(x−h)) / 2h`.
pub fn central<T: Real, F: Fn(T) -> T>(f: F, x: T) -> T {
    let h = central_step(x);
    (f(x + h) - f(x - h)) / (h + h)
}

/// One-sided first difference on the right, second order.
pub fn forward<T: Real, F: Fn(T) -> T>(f: F, x: T) -> T {
    let h = T::epsilon().cbrt() * scale(x);
    let (f0, f1, f2) = (f(x), f(x + h), f(x + h + h));
    (lit::<T>(-3.0) * f0 + lit::<T>(4.0) * f1 - f2) / (h + h)
}

/// One-sided first difference on the left, second order.
pub fn backward<T: Real, F: Fn(T) -> T>(f: F, x: T) -> T {
    let h = T::epsilon().cbrt() * scale(x);
    let (f0, f1, f2) = (f(x), f(x - h), f(x - h - h));
    (lit::<T>(3.0) * f0 - lit::<T>(4.0) * f1 + f2) / (h + h)
}

/// Central second difference.
pub fn second<T: Real, F: Fn(T) -> T>(f: F, x: T) -> T {
    let h = T::epsilon().powf(lit(0.25)) * scale(x);
    (f(x + h) - f(x) - f(x) + f(x - h)) / (h * h)
}
