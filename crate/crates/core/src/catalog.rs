//! A fixed catalog of univariate skew-symmetric laws used by tests,
//! verification suites and the command line.

use crate::bases::SymmetricBase;
use crate::perturb::{OddFn, PerturbationFn};
use crate::real::{lit, Real};
use crate::skew1d::SkewDensity1D;

fn law<T: Real>(base: SymmetricBase<T>, g0: SymmetricBase<T>, w: OddFn<T>) -> SkewDensity1D<T> {
    SkewDensity1D::new(base, PerturbationFn::compose(g0, w).expect("catalog weights are odd")).expect("catalog laws are densities")
}

/// Twelve named univariate laws spanning light and heavy tailed bases,
/// monotone and non-monotone weights, and the degenerate perturbations.
pub fn univariate<T: Real>() -> Vec<(String, SkewDensity1D<T>)> {
    let l = lit::<T>;
    let n = SymmetricBase::normal;
    let c = SymmetricBase::cauchy;
    let cubic_minus = OddFn::poly(vec![(3, T::one()), (1, -T::one())]).expect("odd powers");
    vec![
        ("skew-normal(1)".into(), SkewDensity1D::skew_normal(l(1.0))),
        ("skew-normal(-3)".into(), SkewDensity1D::skew_normal(l(-3.0))),
        ("skew-normal(5)".into(), SkewDensity1D::skew_normal(l(5.0))),
        ("normal".into(), SkewDensity1D::new(n(), PerturbationFn::null()).expect("density")),
        (
            "half-normal".into(),
            SkewDensity1D::new(n(), PerturbationFn::half_line()).expect("density"),
        ),
        ("cauchy/cauchy x^3-x".into(), law(c(), c(), cubic_minus)),
        ("cauchy/cauchy x^3".into(), law(c(), c(), OddFn::cubic(T::zero(), T::one()))),
        (
            "t5/t6 skew-t weight".into(),
            law(
                SymmetricBase::student_t(l(5.0)).expect("nu > 0"),
                SymmetricBase::student_t(l(6.0)).expect("nu > 0"),
                OddFn::skew_t(l(2.0), l(5.0)).expect("nu > 0"),
            ),
        ),
        (
            "logistic/logistic 2x".into(),
            law(SymmetricBase::logistic(), SymmetricBase::logistic(), OddFn::linear(l(2.0))),
        ),
        (
            "laplace/normal x+x^3".into(),
            law(SymmetricBase::laplace(), n(), OddFn::cubic(T::one(), T::one())),
        ),
        (
            "subbotin(1.5) -1.5x".into(),
            law(
                SymmetricBase::subbotin(l(1.5)).expect("nu > 0"),
                SymmetricBase::subbotin(l(1.5)).expect("nu > 0"),
                OddFn::linear(l(-1.5)),
            ),
        ),
        ("normal/normal x^3".into(), law(n(), n(), OddFn::cubic(T::zero(), T::one()))),
    ]
}
