//! Skew-symmetric distributions: densities of the form `f(x) = 2 f₀(x) G(x)`
//! where `f₀` is centrally symmetric and `G ≥ 0` satisfies
//! `G(x) + G(−x) = 1`, usually written `G = G₀∘w` with `G₀` a symmetric CDF
//! and `w` odd.
//!
//! The crate covers construction and decomposition of such laws, their
//! distributional invariance under the choice of `G`, the "greater on the
//! right" order between perturbation functions, mode structure, and
//! numerical checks of log-, s- and quasi-concavity, including the
//! skew-elliptical laws generated by conditioning.
//!
//! Every numeric type is generic over [`Real`]; aliases for `f64` are
//! exported at the crate root, and for `f32` with a `32` suffix.

// `!(x > y)` is used on purpose so that NaN fails the guard; quadrature
// tables keep their published digits.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::excessive_precision)]

pub mod bases;
pub mod catalog;
pub mod characterize;
pub mod concavity;
pub mod error;
pub mod modes;
pub mod multivar;
pub mod numerics;
pub mod ordering;
pub mod perturb;
pub mod real;
pub mod skew1d;

pub use error::{Error, Result};
pub use perturb::TriState;
pub use real::Real;

pub type Interval = numerics::Interval<f64>;
pub type QuadSpec = numerics::QuadSpec<f64>;
pub type SymmetricBase = bases::SymmetricBase<f64>;
pub type OddFn = perturb::OddFn<f64>;
pub type PerturbationFn = perturb::PerturbationFn<f64>;
pub type SkewDensity1D = skew1d::SkewDensity1D<f64>;
pub type Matrix = multivar::Matrix<f64>;
pub type EllipticalGenerator = multivar::EllipticalGenerator<f64>;
pub type EllipticalDensity = multivar::EllipticalDensity<f64>;
pub type ConditioningSpec = multivar::ConditioningSpec<f64>;
pub type SkewElliptical = multivar::SkewElliptical<f64>;
pub type SubbotinMv = multivar::SubbotinMv<f64>;
pub type Sep = multivar::Sep<f64>;
pub type Esn = multivar::Esn<f64>;
pub type SkewSymmetricNd = multivar::SkewSymmetricNd<f64>;

pub type Interval32 = numerics::Interval<f32>;
pub type QuadSpec32 = numerics::QuadSpec<f32>;
pub type SymmetricBase32 = bases::SymmetricBase<f32>;
pub type OddFn32 = perturb::OddFn<f32>;
pub type PerturbationFn32 = perturb::PerturbationFn<f32>;
pub type SkewDensity1D32 = skew1d::SkewDensity1D<f32>;
pub type Matrix32 = multivar::Matrix<f32>;
pub type EllipticalGenerator32 = multivar::EllipticalGenerator<f32>;
pub type SkewElliptical32 = multivar::SkewElliptical<f32>;
