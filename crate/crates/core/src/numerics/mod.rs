//! Deterministic numerical kernels: adaptive quadrature, root bracketing,
//! finite differences, local maximization, special functions and
//! Kolmogorov–Smirnov statistics.
//!
//! Everything here is a pure function of its arguments.

pub mod diff;
pub mod ks;
pub mod optim;
pub mod quad;
pub mod roots;
pub mod special;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::real::{lit, to_f64, Real};

/// Seed of the independent stream number `stream` under the master `seed`.
pub fn substream_seed(seed: u64, stream: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.next_u64()
}

pub use quad::{integrate, integrate_box, integrate_pieces, integrate_with_estimate, QuadEstimate};
pub use roots::{brent_root, find_roots};

/// Open or closed real interval with possibly infinite endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Real> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if lo.is_nan() || hi.is_nan() || lo >= hi {
            return Err(Error::InvalidInterval {
                lo: to_f64(lo),
                hi: to_f64(hi),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn real_line() -> Self {
        Self {
            lo: T::neg_infinity(),
            hi: T::infinity(),
        }
    }

    pub fn lo(&self) -> T {
        self.lo
    }

    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn lo_is_infinite(&self) -> bool {
        self.lo.is_infinite()
    }

    pub fn hi_is_infinite(&self) -> bool {
        self.hi.is_infinite()
    }

    pub fn is_bounded(&self) -> bool {
        !self.lo_is_infinite() && !self.hi_is_infinite()
    }

    pub fn contains(&self, x: T) -> bool {
        x >= self.lo && x <= self.hi
    }

    pub fn clamp(&self, x: T) -> T {
        x.max(self.lo).min(self.hi)
    }

    /// Intersection with `[-r, r]`.
    pub fn truncate(&self, r: T) -> Self {
        Self {
            lo: self.lo.max(-r),
            hi: self.hi.min(r),
        }
    }

    /// `n + 1` equally spaced points from `lo` to `hi`; both ends must be finite.
    pub fn grid(&self, n: usize) -> Vec<T> {
        let n = n.max(1);
        let step = (self.hi - self.lo) / lit(n as f64);
        (0..=n).map(|i| if i == n { self.hi } else { self.lo + step * lit(i as f64) }).collect()
    }
}

/// Tolerances for [`integrate`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadSpec<T> {
    pub abs_tol: T,
    pub rel_tol: T,
    pub max_subdivisions: usize,
}

impl<T: Real> Default for QuadSpec<T> {
    fn default() -> Self {
        Self {
            abs_tol: crate::real::tol(1e-10),
            rel_tol: crate::real::tol(1e-8),
            max_subdivisions: 2000,
        }
    }
}

impl<T: Real> QuadSpec<T> {
    pub fn new(abs_tol: T, rel_tol: T, max_subdivisions: usize) -> Result<Self> {
        if !(abs_tol > T::zero() && rel_tol > T::zero()) || max_subdivisions == 0 {
            return Err(Error::BadParam(format!(
                "quadrature tolerances must be positive (abs {}, rel {})",
                abs_tol, rel_tol
            )));
        }
        Ok(Self {
            abs_tol,
            rel_tol,
            max_subdivisions,
        })
    }

    /// Tight tolerances for integrands whose value is later divided or
    /// compared at the 1e-9 level.
    pub fn tight() -> Self {
        Self {
            abs_tol: T::min_positive_value(),
            rel_tol: crate::real::tol(1e-12),
            max_subdivisions: 4000,
        }
    }

    pub fn with_abs_tol(mut self, abs_tol: T) -> Self {
        self.abs_tol = abs_tol;
        self
    }

    pub fn with_rel_tol(mut self, rel_tol: T) -> Self {
        self.rel_tol = rel_tol;
        self
    }
}
