//! Elliptical and skew-elliptical laws in dimension `d ≤ 3`.

pub mod conditioning;
pub mod elliptical;
pub mod esn;
pub mod linalg;
pub mod nd;
pub mod subbotin;
pub mod two_disc;

pub use conditioning::{branco_dey_g, skew_by_conditioning, ConditioningSpec, SkewElliptical};
pub use elliptical::{EllipticalDensity, EllipticalGenerator, GeneratorKind};
pub use esn::{esn_density, Esn};
pub use linalg::{Cholesky, Matrix};
pub use nd::{NdBase, SkewSymmetricNd};
pub use subbotin::{
    product_subbotin, product_subbotin_skewed, sep_density, subbotin_hessian_form, subbotin_hessian_trials, subbotin_mv, Sep, SubbotinMv,
};
pub use two_disc::{two_disc_counterexample, two_disc_k, two_disc_local_maxima, two_disc_nonconvex_level, two_disc_spec};
