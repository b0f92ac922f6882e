//! Mode structure of univariate skew-symmetric laws.
//!
//! Critical points solve `h₀(x) = h_g(x)`, i.e. they are the zeros of
//! `h(x) = (log f)′(x) = −h₀(x) + g(x)/G(x)`.

use crate::error::{Error, Result};
use crate::numerics::{diff, find_roots, Interval};
use crate::perturb::{OddFn, PerturbationFn, TriState};
use crate::real::{lit, to_f64, Real};
use crate::skew1d::SkewDensity1D;

/// Half-width of the neighbourhood removed around non-differentiable points.
pub const KINK_EXCLUSION: f64 = 1e-6;
/// Grid size of the sufficient-condition checks.
pub const CONDITION_GRID: usize = 401;
/// Slack of the sampled monotonicity and concavity checks.
pub const CONDITION_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CriticalKind {
    Mode,
    Antimode,
    Inflection,
    /// Maximum attained at an edge of the support.
    BoundaryMax,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CriticalPoint {
    pub x: f64,
    pub kind: CriticalKind,
}

/// Sampled answers to the hypotheses of the unimodality criterion.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SufficientConditions {
    pub g_monotone_increasing: TriState,
    pub f0_unimodal_at_0: TriState,
    pub h0_increasing: TriState,
    pub g_decreasing_on_positive: TriState,
    pub g_concave_on_positive: TriState,
    pub f0_log_concave: TriState,
    /// `h₀` strictly increasing or `g` strictly decreasing somewhere.
    pub strict: TriState,
    /// The checks were run on the mirrored law because `G` decreases.
    pub mirrored: bool,
}

impl SufficientConditions {
    /// Whether the sampled hypotheses guarantee a single mode.
    pub fn guarantee_unimodal(&self) -> bool {
        self.g_monotone_increasing.is_yes()
            && self.f0_unimodal_at_0.is_yes()
            && self.h0_increasing.is_yes()
            && self.g_decreasing_on_positive.is_yes()
            && self.strict.is_yes()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum UnimodalVerdict {
    Guaranteed,
    ObservedUnimodal,
    Multimodal,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeReport {
    pub critical_points: Vec<CriticalPoint>,
    pub conditions: SufficientConditions,
    pub verdict: UnimodalVerdict,
    /// The hypotheses held but the scan did not find exactly one mode.
    pub sufficiency_conflict: bool,
    pub window: (f64, f64),
}

impl ModeReport {
    pub fn modes(&self) -> Vec<f64> {
        self.of_kind(&[CriticalKind::Mode, CriticalKind::BoundaryMax])
    }

    pub fn antimodes(&self) -> Vec<f64> {
        self.of_kind(&[CriticalKind::Antimode])
    }

    fn of_kind(&self, kinds: &[CriticalKind]) -> Vec<f64> {
        self.critical_points.iter().filter(|c| kinds.contains(&c.kind)).map(|c| c.x).collect()
    }
}

/// `h = (log f)′`, from the closed forms when available and by central
/// differences of `log f` otherwise.
fn log_slope<T: Real>(d: &SkewDensity1D<T>, x: T) -> T {
    d.log_slope(x).unwrap_or_else(|| diff::central(|t| d.ln_pdf(t), x))
}

fn analysis_window<T: Real>(d: &SkewDensity1D<T>) -> Interval<T> {
    let q = d.base().quantile(T::one() - lit(1e-6)).unwrap_or(lit(25.0));
    let l = q.max(lit(4.0)).min(lit(25.0));
    let support = d.base().support();
    Interval::new(support.lo().max(-l), support.hi().min(l)).expect("window has positive width")
}

/// Maximal runs of the window where `log f` is finite, cut at kinks.
fn segments<T: Real>(d: &SkewDensity1D<T>, window: Interval<T>, n: usize, kinks: &[T]) -> Vec<(T, T)> {
    let eps: T = lit(KINK_EXCLUSION);
    let mut cuts: Vec<T> = kinks.iter().copied().filter(|&k| window.contains(k)).collect();
    cuts.sort_by(|a, b| a.partial_cmp(b).expect("finite kinks"));
    cuts.dedup();
    let mut edges = vec![(window.lo(), T::zero())];
    for &k in &cuts {
        edges.push((k, eps));
    }
    edges.push((window.hi(), T::zero()));
    let mut out = Vec::new();
    for w in edges.windows(2) {
        let (a, b) = (w[0].0 + w[0].1, w[1].0 - w[1].1);
        if !(b > a) {
            continue;
        }
        // Split further where the density vanishes.
        let pts = Interval::new(a, b).expect("b > a").grid(n.max(8));
        let mut start: Option<T> = None;
        let mut last = a;
        for &x in &pts {
            let alive = d.ln_pdf(x).is_finite();
            match (alive, start) {
                (true, None) => start = Some(x),
                (false, Some(s)) => {
                    if last > s {
                        out.push((s, last));
                    }
                    start = None;
                }
                _ => {}
            }
            last = x;
        }
        if let Some(s) = start {
            if b > s {
                out.push((s, b));
            }
        }
    }
    out
}

fn sign<T: Real>(v: T) -> i8 {
    if v > T::zero() {
        1
    } else if v < T::zero() {
        -1
    } else {
        0
    }
}

/// Finds and classifies the critical points of `f` and evaluates the
/// sufficient conditions for a single mode.
pub fn analyze_modes<T: Real>(d: &SkewDensity1D<T>, grid_n: usize) -> Result<ModeReport> {
    let window = analysis_window(d);
    let mut kinks = d.base().non_differentiable_points();
    kinks.extend(d.perturbation().non_differentiable_points());
    let width = window.hi() - window.lo();
    let segs = segments(d, window, grid_n, &kinks);
    let h = |x: T| log_slope(d, x);

    let mut points: Vec<CriticalPoint> = Vec::new();
    for &(a, b) in &segs {
        let n = (lit::<T>(grid_n as f64) * (b - a) / width).to_usize().unwrap_or(8).max(8);
        for x in Interval::new(a, b)?.grid(n) {
            if !h(x).is_finite() {
                return Err(Error::NonDifferentiable { x: to_f64(x) });
            }
        }
        for r in find_roots(h, Interval::new(a, b)?, n) {
            let e = (b - a) * lit(1e-6);
            let kind = match (sign(h(r - e)), sign(h(r + e))) {
                (1, -1) => CriticalKind::Mode,
                (-1, 1) => CriticalKind::Antimode,
                _ => CriticalKind::Inflection,
            };
            points.push(CriticalPoint { x: to_f64(r), kind });
        }
    }
    // Junctions between segments (kinks) and support edges.
    let probe: T = lit(2.0 * KINK_EXCLUSION);
    classify_junctions(d, &segs, &kinks, window, probe, &mut points);
    points.sort_by(|p, q| p.x.partial_cmp(&q.x).expect("finite"));
    points.dedup_by(|p, q| (p.x - q.x).abs() <= 1e-9 && p.kind == q.kind);

    let conditions = sufficient_conditions(d, window, &kinks);
    let n_modes = points
        .iter()
        .filter(|p| matches!(p.kind, CriticalKind::Mode | CriticalKind::BoundaryMax))
        .count();
    let guaranteed = conditions.guarantee_unimodal();
    let verdict = match (guaranteed, n_modes) {
        (true, 1) => UnimodalVerdict::Guaranteed,
        (_, 0 | 1) => UnimodalVerdict::ObservedUnimodal,
        _ => UnimodalVerdict::Multimodal,
    };
    Ok(ModeReport {
        critical_points: points,
        conditions,
        verdict,
        sufficiency_conflict: guaranteed && n_modes != 1,
        window: (to_f64(window.lo()), to_f64(window.hi())),
    })
}

fn is_kink<T: Real>(kinks: &[T], x: T, tol: T) -> bool {
    kinks.iter().any(|&k| (k - x).abs() <= tol)
}

/// Classifies kinks between adjacent segments and edges where the density
/// drops to zero, using one-sided slopes just inside each segment.
fn classify_junctions<T: Real>(d: &SkewDensity1D<T>, segs: &[(T, T)], kinks: &[T], window: Interval<T>, probe: T, points: &mut Vec<CriticalPoint>) {
    let h = |x: T| log_slope(d, x);
    let eps: T = lit(KINK_EXCLUSION);
    let near = eps * lit(4.0);
    for &k in kinks.iter().filter(|&&k| window.contains(k)) {
        let left = segs.iter().find(|s| (s.1 - (k - eps)).abs() <= near);
        let right = segs.iter().find(|s| (s.0 - (k + eps)).abs() <= near);
        let hl = left.map(|s| h(s.1 - probe));
        let hr = right.map(|s| h(s.0 + probe));
        let kind = match (hl.map(sign), hr.map(sign)) {
            (Some(1), Some(-1)) => Some(CriticalKind::Mode),
            (Some(-1), Some(1)) => Some(CriticalKind::Antimode),
            (None, Some(-1)) | (Some(1), None) => Some(CriticalKind::BoundaryMax),
            _ => None,
        };
        if let Some(kind) = kind {
            points.push(CriticalPoint { x: to_f64(k), kind });
        }
    }
    // Support edges not caused by a kink: f increasing up to the right end
    // or decreasing from the left end.
    for &(a, b) in segs {
        let dead_left = a > window.lo() && !is_kink(kinks, a, near + eps) && !d.ln_pdf(a - probe).is_finite();
        let dead_right = b < window.hi() && !is_kink(kinks, b, near + eps) && !d.ln_pdf(b + probe).is_finite();
        let at_support_lo = a == window.lo() && a == d.base().support().lo();
        let at_support_hi = b == window.hi() && b == d.base().support().hi();
        if (dead_left || at_support_lo) && h(a + probe) < T::zero() {
            points.push(CriticalPoint {
                x: to_f64(a),
                kind: CriticalKind::BoundaryMax,
            });
        }
        if (dead_right || at_support_hi) && h(b - probe) > T::zero() {
            points.push(CriticalPoint {
                x: to_f64(b),
                kind: CriticalKind::BoundaryMax,
            });
        }
    }
}

fn monotone<T: Real>(vals: &[T], increasing: bool, tol: T) -> (bool, bool) {
    let mut ok = true;
    let mut strict = false;
    for w in vals.windows(2) {
        let step = if increasing { w[1] - w[0] } else { w[0] - w[1] };
        if step < -tol {
            ok = false;
        }
        if step > tol {
            strict = true;
        }
    }
    (ok, strict)
}

fn concave<T: Real>(vals: &[T], tol: T) -> bool {
    vals.windows(3).all(|w| w[0] - w[1] - w[1] + w[2] <= tol)
}

fn sufficient_conditions<T: Real>(d: &SkewDensity1D<T>, window: Interval<T>, kinks: &[T]) -> SufficientConditions {
    let tol: T = lit(CONDITION_TOL);
    let excl: T = lit(KINK_EXCLUSION);
    let base = d.base();
    let g = d.perturbation();
    let keep = |x: &T| !kinks.iter().any(|&k| (*x - k).abs() <= excl);
    let full: Vec<T> = window.grid(CONDITION_GRID - 1).into_iter().filter(keep).collect();

    let gv: Vec<T> = full.iter().map(|&x| g.eval(x)).collect();
    let (inc, _) = monotone(&gv, true, tol);
    let (dec, dec_strict) = monotone(&gv, false, tol);
    // A decreasing G is handled by mirroring x ↦ −x.
    let mirrored = !inc && dec && dec_strict;
    let s: T = if mirrored { -T::one() } else { T::one() };
    let g_monotone_increasing = TriState::from_bool(inc || mirrored);

    let f0v: Vec<T> = full.iter().map(|&x| base.pdf(x)).collect();
    let f0_unimodal = full.windows(2).zip(f0v.windows(2)).all(|(x, f)| {
        if x[1] <= T::zero() {
            f[1] - f[0] >= -tol
        } else if x[0] >= T::zero() {
            f[0] - f[1] >= -tol
        } else {
            true
        }
    });

    let positive: Vec<T> = Interval::new(T::zero(), window.hi())
        .expect("window contains the origin")
        .grid(CONDITION_GRID - 1)
        .into_iter()
        .filter(keep)
        .collect();
    let h0v: Vec<T> = positive.iter().map(|&x| base.h0(x)).collect();
    let (h0_inc, h0_strict) = monotone(&h0v, true, tol);

    let gdens: Option<Vec<T>> = positive.iter().map(|&x| g.density(s * x).map(|v| s * v)).collect();
    let (g_dec, g_strict) = match &gdens {
        Some(v) => {
            let (ok, strict) = monotone(v, false, tol);
            (TriState::from_bool(ok), strict)
        }
        None => (TriState::Unknown, false),
    };
    let gpos: Vec<T> = positive.iter().map(|&x| g.eval(s * x)).collect();
    let lnf0: Vec<T> = full.iter().map(|&x| base.ln_pdf(x)).filter(|v| v.is_finite()).collect();

    SufficientConditions {
        g_monotone_increasing,
        f0_unimodal_at_0: TriState::from_bool(f0_unimodal),
        h0_increasing: TriState::from_bool(h0_inc),
        g_decreasing_on_positive: g_dec,
        g_concave_on_positive: TriState::from_bool(concave(&gpos, tol)),
        f0_log_concave: TriState::from_bool(concave(&lnf0, tol)),
        strict: TriState::from_bool((h0_inc && h0_strict) || (g_dec.is_yes() && g_strict)),
        mirrored,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum MaGentonVerdict {
    GuaranteedUnimodal,
    AtMostTwoModes,
}

/// Criterion for `2φ(x)Φ(αx + βx³)`: a single mode is guaranteed when
/// `α, β > 0` and `α³ > 6β`, and trivially when `β = 0`.
pub fn ma_genton_check<T: Real>(alpha: T, beta: T) -> MaGentonVerdict {
    let z = T::zero();
    if beta == z || (alpha > z && beta > z && alpha * alpha * alpha > lit::<T>(6.0) * beta) {
        MaGentonVerdict::GuaranteedUnimodal
    } else {
        MaGentonVerdict::AtMostTwoModes
    }
}

/// [`ma_genton_check`] together with the numerical mode scan of the same law.
pub fn ma_genton_cross_check<T: Real>(alpha: T, beta: T, grid_n: usize) -> Result<(MaGentonVerdict, ModeReport)> {
    let g = PerturbationFn::compose(crate::bases::SymmetricBase::normal(), OddFn::cubic(alpha, beta))?;
    let d = SkewDensity1D::new(crate::bases::SymmetricBase::normal(), g)?;
    Ok((ma_genton_check(alpha, beta), analyze_modes(&d, grid_n)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bases::SymmetricBase;
    use approx::assert_abs_diff_eq;

    fn law(base: SymmetricBase<f64>, g0: SymmetricBase<f64>, w: OddFn<f64>) -> SkewDensity1D<f64> {
        SkewDensity1D::new(base, PerturbationFn::compose(g0, w).unwrap()).unwrap()
    }

    fn assert_stencil(d: &SkewDensity1D<f64>, r: &ModeReport) {
        for p in &r.critical_points {
            let h = 1e-3;
            let v: Vec<f64> = (-2..=2).map(|i| d.pdf(p.x + h * i as f64)).collect();
            match p.kind {
                CriticalKind::Mode => assert!(v[2] >= v[0] && v[2] >= v[1] && v[2] >= v[3] && v[2] >= v[4], "{p:?} {v:?}"),
                CriticalKind::Antimode => assert!(v[2] <= v[0] && v[2] <= v[1] && v[2] <= v[3] && v[2] <= v[4], "{p:?} {v:?}"),
                _ => {}
            }
        }
    }

    #[test]
    fn cubic_weight_is_bimodal() {
        let n = SymmetricBase::normal();
        let d = law(n, n, OddFn::cubic(0.0, 1.0));
        let r = analyze_modes(&d, 2000).unwrap();
        let kinds: Vec<CriticalKind> = r.critical_points.iter().map(|p| p.kind).collect();
        assert_eq!(kinds, vec![CriticalKind::Mode, CriticalKind::Antimode, CriticalKind::Mode], "{r:#?}");
        assert_abs_diff_eq!(r.critical_points[0].x, 0.0, epsilon = 1e-9);
        assert!(r.critical_points.iter().all(|p| p.x >= -1e-9));
        assert_eq!(r.verdict, UnimodalVerdict::Multimodal);
        assert!(!r.conditions.g_decreasing_on_positive.is_yes());
        assert_stencil(&d, &r);
    }

    #[test]
    fn skew_normal_is_guaranteed() {
        let d = SkewDensity1D::skew_normal(1.0);
        let r = analyze_modes(&d, 2000).unwrap();
        assert_eq!(r.modes().len(), 1);
        assert!(r.modes()[0] > 0.0);
        assert_eq!(r.verdict, UnimodalVerdict::Guaranteed);
        assert!(!r.sufficiency_conflict);
        let mirrored = analyze_modes(&SkewDensity1D::skew_normal(-2.0), 2000).unwrap();
        assert!(mirrored.conditions.mirrored);
        assert_eq!(mirrored.verdict, UnimodalVerdict::Guaranteed);
        assert!(mirrored.modes()[0] < 0.0);
    }

    #[test]
    fn null_perturbation_mode_at_origin() {
        for base in [
            SymmetricBase::normal(),
            SymmetricBase::logistic(),
            SymmetricBase::student_t(3.0).unwrap(),
            SymmetricBase::laplace(),
        ] {
            let d = SkewDensity1D::new(base, PerturbationFn::null()).unwrap();
            let r = analyze_modes(&d, 1000).unwrap();
            assert_eq!(r.modes().len(), 1, "{}: {r:#?}", base.name());
            assert_abs_diff_eq!(r.modes()[0], 0.0, epsilon = 1e-9);
        }
    }

    #[test]
    fn half_normal_boundary_max() {
        let d = SkewDensity1D::new(SymmetricBase::<f64>::normal(), PerturbationFn::half_line()).unwrap();
        let r = analyze_modes(&d, 1000).unwrap();
        assert_eq!(r.critical_points.len(), 1, "{r:#?}");
        assert_eq!(r.critical_points[0].kind, CriticalKind::BoundaryMax);
        assert_abs_diff_eq!(r.critical_points[0].x, 0.0, epsilon = 1e-9);
    }

    #[test]
    fn uniform_base_increasing_to_supremum() {
        let u = SymmetricBase::uniform(1.0).unwrap();
        let d = law(u, SymmetricBase::normal(), OddFn::linear(2.0));
        let r = analyze_modes(&d, 1000).unwrap();
        assert_eq!(r.modes(), vec![1.0], "{r:#?}");
        assert_eq!(r.critical_points[0].kind, CriticalKind::BoundaryMax);
    }

    #[test]
    fn ma_genton_cases() {
        let (v, r) = ma_genton_cross_check(2.0, 1.0, 2000).unwrap();
        assert_eq!(v, MaGentonVerdict::GuaranteedUnimodal);
        assert_eq!(r.modes().len(), 1);
        assert_eq!(r.verdict, UnimodalVerdict::Guaranteed);
        let (v, r) = ma_genton_cross_check(0.0, 1.0, 2000).unwrap();
        assert_eq!(v, MaGentonVerdict::AtMostTwoModes);
        assert_eq!(r.modes().len(), 2);
        let (v, r) = ma_genton_cross_check(1.0, 0.0, 2000).unwrap();
        assert_eq!(v, MaGentonVerdict::GuaranteedUnimodal);
        assert_eq!(r.modes().len(), 1);
        assert_eq!(ma_genton_check(1.0, 1.0), MaGentonVerdict::AtMostTwoModes);
    }

    #[test]
    fn soundness_and_negative_mode_exclusion() {
        let bases = [
            SymmetricBase::normal(),
            SymmetricBase::logistic(),
            SymmetricBase::subbotin(1.5).unwrap(),
            SymmetricBase::student_t(4.0).unwrap(),
        ];
        let weights = [
            OddFn::linear(0.7),
            OddFn::linear(3.0),
            OddFn::cubic(2.0, 1.0),
            OddFn::cubic(0.3, 1.0),
            OddFn::skew_t(2.0, 3.0).unwrap(),
        ];
        for base in bases {
            for g0 in [SymmetricBase::normal(), SymmetricBase::logistic()] {
                for w in &weights {
                    let d = law(base, g0, w.clone());
                    let r = analyze_modes(&d, 1500).unwrap();
                    if r.conditions.g_monotone_increasing.is_yes() && r.conditions.f0_unimodal_at_0.is_yes() && !r.conditions.mirrored {
                        assert!(r.modes().iter().all(|&m| m >= -1e-9), "{}: {r:#?}", d.name());
                    }
                    if r.conditions.guarantee_unimodal() {
                        assert_eq!(r.modes().len(), 1, "{}", d.name());
                    }
                    assert_stencil(&d, &r);
                }
            }
        }
    }

    #[test]
    fn student_base_fails_h0_condition() {
        let t = SymmetricBase::student_t(3.0).unwrap();
        let d = law(t, t, OddFn::linear(1.0));
        let r = analyze_modes(&d, 1000).unwrap();
        assert_eq!(r.conditions.h0_increasing, TriState::No);
        assert_eq!(r.modes().len(), 1);
        assert_eq!(r.verdict, UnimodalVerdict::ObservedUnimodal);
    }
}
