//! Root bracketing on a uniform grid followed by Brent refinement
//! (bisection safeguarding secant / inverse quadratic steps).

use super::Interval;
use crate::error::{Error, Result};
use crate::real::{lit, to_f64, Real};

const MAX_ITER: usize = 200;

/// Refines a sign-changing bracket `[a, b]` to machine precision.
pub fn brent_root<T, F>(f: F, a: T, b: T) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    let fa = f(a);
    let fb = f(b);
    brent_with_values(&f, a, b, fa, fb)
}

pub(crate) fn brent_with_values<T, F>(f: &F, a: T, b: T, fa: T, fb: T) -> Result<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if !(fa.is_finite() && fb.is_finite()) || fa.signum() == fb.signum() {
        return Err(Error::Domain {
            function: "brent_root",
            detail: format!("no sign change on [{}, {}]", to_f64(a), to_f64(b)),
        });
    }
    let two: T = lit(2.0);
    let half: T = lit(0.5);
    let (mut a, mut b, mut c) = (a, b, b);
    let (mut fa, mut fb, mut fc) = (fa, fb, fb);
    let mut d = b - a;
    let mut e = d;
    for _ in 0..MAX_ITER {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = two * T::epsilon() * b.abs() + T::min_positive_value();
        let m = half * (c - b);
        if m.abs() <= tol || fb == T::zero() {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = two * m * s;
                q = T::one() - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (two * m * qa * (qa - r) - (b - a) * (r - T::one()));
                q = (qa - T::one()) * (r - T::one()) * (s - T::one());
            }
            if p > T::zero() {
                q = -q;
            } else {
                p = -p;
            }
            let three: T = lit(3.0);
            if two * p < (three * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b = if d.abs() > tol { b + d } else { b + tol * m.signum() };
        fb = f(b);
    }
    Ok(b)
}

/// All sign-change roots of `f` on the bounded interval `iv`, located on a
/// grid of `grid_n` cells and refined; sorted ascending. Grid points where
/// `f` is exactly zero are reported when `f` changes sign across them.
pub fn find_roots<T, F>(f: F, iv: Interval<T>, grid_n: usize) -> Vec<T>
where
    T: Real,
    F: Fn(T) -> T,
{
    let xs = iv.grid(grid_n.max(1));
    let ys: Vec<T> = xs.iter().map(|&x| f(x)).collect();
    let mut roots = Vec::new();
    for i in 0..xs.len() {
        let y = ys[i];
        if !y.is_finite() {
            continue;
        }
        if y == T::zero() {
            let left = ys[..i].iter().rev().find(|v| v.is_finite() && **v != T::zero());
            let right = ys[i + 1..].iter().find(|v| v.is_finite() && **v != T::zero());
            let crosses = match (left, right) {
                (Some(l), Some(r)) => l.signum() != r.signum(),
                _ => true,
            };
            if crosses {
                roots.push(xs[i]);
            }
            continue;
        }
        if i + 1 < xs.len() {
            let y1 = ys[i + 1];
            if y1.is_finite() && y1 != T::zero() && y.signum() != y1.signum() {
                if let Ok(r) = brent_with_values(&f, xs[i], xs[i + 1], y, y1) {
                    roots.push(r);
                }
            }
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots
}
