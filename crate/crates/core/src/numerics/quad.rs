//! Adaptive Gauss–Kronrod (7/15) quadrature with a global error criterion.
//!
//! Infinite ranges are mapped onto bounded ones with `x = t / (1 - t²)`:
//! `t ∈ (-1, 1)` for the whole line and `t ∈ (0, 1)` for half lines.

use super::{Interval, QuadSpec};
use crate::error::{Error, Result};
use crate::real::{lit, to_f64, Real};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
// Gauss weights for XGK[1], XGK[3], XGK[5], XGK[7].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

const INITIAL_PANELS: usize = 4;

/// Integral value with the quadrature's own error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate<T> {
    pub value: T,
    pub error: T,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy)]
enum Map<T> {
    Identity,
    Line,
    Right(T),
    Left(T),
}

impl<T: Real> Map<T> {
    fn for_interval(iv: &Interval<T>) -> (Self, T, T) {
        match (iv.lo_is_infinite(), iv.hi_is_infinite()) {
            (false, false) => (Map::Identity, iv.lo(), iv.hi()),
            (true, true) => (Map::Line, -T::one(), T::one()),
            (false, true) => (Map::Right(iv.lo()), T::zero(), T::one()),
            (true, false) => (Map::Left(iv.hi()), T::zero(), T::one()),
        }
    }

    /// Returns `(x, dx/dt)`; `None` once the map leaves the representable range.
    #[inline]
    fn apply(&self, t: T) -> Option<(T, T)> {
        let stretch = |t: T| {
            let d = T::one() - t * t;
            if d <= T::zero() {
                return None;
            }
            let x = t / d;
            let jac = (T::one() + t * t) / (d * d);
            if x.is_finite() && jac.is_finite() {
                Some((x, jac))
            } else {
                None
            }
        };
        match *self {
            Map::Identity => Some((t, T::one())),
            Map::Line => stretch(t),
            Map::Right(a) => stretch(t).map(|(x, j)| (a + x, j)),
            Map::Left(b) => stretch(t).map(|(x, j)| (b - x, j)),
        }
    }
}

struct Panel<T> {
    a: T,
    b: T,
    value: T,
    error: T,
    splittable: bool,
}

fn gauss_kronrod<T, F>(f: &F, map: &Map<T>, a: T, b: T) -> Result<(T, T)>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    let eval = |t: T| -> Result<T> {
        match map.apply(t) {
            None => Ok(T::zero()),
            Some((x, jac)) => {
                let v = f(x)?;
                if !v.is_finite() {
                    return Err(Error::NonFinite { x: to_f64(x) });
                }
                if v == T::zero() {
                    Ok(T::zero())
                } else {
                    Ok(v * jac)
                }
            }
        }
    };
    let half: T = lit(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let fc = eval(center)?;
    let mut kronrod = fc * lit(WGK[7]);
    let mut gauss = fc * lit(WG[3]);
    let mut res_abs = kronrod.abs();
    let mut fv1 = [T::zero(); 7];
    let mut fv2 = [T::zero(); 7];
    for j in 0..7 {
        let dx = half_len * lit(XGK[j]);
        let f1 = eval(center - dx)?;
        let f2 = eval(center + dx)?;
        fv1[j] = f1;
        fv2[j] = f2;
        kronrod = kronrod + lit::<T>(WGK[j]) * (f1 + f2);
        res_abs = res_abs + lit::<T>(WGK[j]) * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            gauss = gauss + lit::<T>(WG[j / 2]) * (f1 + f2);
        }
    }
    let mean = kronrod * half;
    let mut res_asc = lit::<T>(WGK[7]) * (fc - mean).abs();
    for j in 0..7 {
        res_asc = res_asc + lit::<T>(WGK[j]) * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let scale = half_len.abs();
    let value = kronrod * half_len;
    res_abs = res_abs * scale;
    res_asc = res_asc * scale;
    let mut error = ((kronrod - gauss) * half_len).abs();
    if res_asc != T::zero() && error != T::zero() {
        let r = (lit::<T>(200.0) * error / res_asc).powf(lit(1.5));
        error = if r < T::one() { res_asc * r } else { res_asc };
    }
    let floor = lit::<T>(50.0) * T::epsilon() * res_abs;
    if floor > error {
        error = floor;
    }
    Ok((value, error))
}

/// Core adaptive routine for integrands that can fail.
pub fn integrate_fallible<T, F>(f: F, iv: Interval<T>, spec: &QuadSpec<T>) -> Result<QuadEstimate<T>>
where
    T: Real,
    F: Fn(T) -> Result<T>,
{
    let (map, a, b) = Map::for_interval(&iv);
    let width = (b - a) / lit(INITIAL_PANELS as f64);
    let mut panels = Vec::with_capacity(INITIAL_PANELS + 64);
    for i in 0..INITIAL_PANELS {
        let pa = a + width * lit(i as f64);
        let pb = if i + 1 == INITIAL_PANELS { b } else { a + width * lit((i + 1) as f64) };
        let (value, error) = gauss_kronrod(&f, &map, pa, pb)?;
        panels.push(Panel {
            a: pa,
            b: pb,
            value,
            error,
            splittable: true,
        });
    }
    let mut subdivisions = 0;
    loop {
        let value: T = panels.iter().map(|p| p.value).sum();
        let error: T = panels.iter().map(|p| p.error).sum();
        let target = spec.abs_tol.max(spec.rel_tol * value.abs());
        if error <= target {
            return Ok(QuadEstimate { value, error, subdivisions });
        }
        let worst = panels
            .iter()
            .enumerate()
            .filter(|(_, p)| p.splittable)
            .max_by(|x, y| x.1.error.partial_cmp(&y.1.error).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i);
        let Some(i) = worst.filter(|_| subdivisions < spec.max_subdivisions) else {
            return Err(Error::NonConvergence {
                subdivisions,
                error: to_f64(error),
            });
        };
        let Panel { a: pa, b: pb, .. } = panels[i];
        let mid = lit::<T>(0.5) * (pa + pb);
        if !(mid > pa && mid < pb) {
            panels[i].splittable = false;
            continue;
        }
        let (v1, e1) = gauss_kronrod(&f, &map, pa, mid)?;
        let (v2, e2) = gauss_kronrod(&f, &map, mid, pb)?;
        panels[i] = Panel {
            a: pa,
            b: mid,
            value: v1,
            error: e1,
            splittable: true,
        };
        panels.push(Panel {
            a: mid,
            b: pb,
            value: v2,
            error: e2,
            splittable: true,
        });
        subdivisions += 1;
    }
}

/// Integral with error estimate.
pub fn integrate_with_estimate<T, F>(f: F, iv: Interval<T>, spec: &QuadSpec<T>) -> Result<QuadEstimate<T>>
where
    T: Real,
    F: Fn(T) -> T,
{
    integrate_fallible(|x| Ok(f(x)), iv, spec)
}

/// `∫ f` over `iv` with estimated error at most `max(abs_tol, rel_tol·|I|)`.
pub fn integrate<T, F>(f: F, iv: Interval<T>, spec: &QuadSpec<T>) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    integrate_with_estimate(f, iv, spec).map(|e| e.value)
}

/// `∫ f` over `iv` split at the interior `breaks`, which is where a
/// piecewise integrand may jump.
pub fn integrate_pieces<T, F>(f: F, iv: Interval<T>, breaks: &[T], spec: &QuadSpec<T>) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    let mut cuts: Vec<T> = breaks.iter().copied().filter(|&c| c > iv.lo() && c < iv.hi()).collect();
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut edges = vec![iv.lo()];
    edges.extend(cuts);
    edges.push(iv.hi());
    let mut total = T::zero();
    for w in edges.windows(2) {
        if w[1] > w[0] {
            total = total + integrate(&f, Interval::new(w[0], w[1])?, spec)?;
        }
    }
    Ok(total)
}

/// Iterated integral of `f` over the product of `ranges` (outermost first).
pub fn integrate_box<T, F>(f: &F, ranges: &[Interval<T>], spec: &QuadSpec<T>) -> Result<T>
where
    T: Real,
    F: Fn(&[T]) -> T + ?Sized,
{
    let mut point = vec![T::zero(); ranges.len()];
    nested(f, ranges, 0, &mut point, spec)
}

fn nested<T, F>(f: &F, ranges: &[Interval<T>], depth: usize, point: &mut [T], spec: &QuadSpec<T>) -> Result<T>
where
    T: Real,
    F: Fn(&[T]) -> T + ?Sized,
{
    if depth == ranges.len() {
        return Ok(f(point));
    }
    let base = point.to_vec();
    integrate_fallible(
        |x| {
            let mut p = base.clone();
            p[depth] = x;
            nested(f, ranges, depth + 1, &mut p, spec)
        },
        ranges[depth],
        spec,
    )
    .map(|e| e.value)
}
