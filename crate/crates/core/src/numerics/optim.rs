//! Grid scan plus golden-section refinement for local extrema.

use super::Interval;
use crate::real::{lit, Real};

/// Golden-section search for a maximum of a unimodal `f` on `[a, b]`.
pub fn golden_max<T: Real, F: Fn(T) -> T>(f: &F, mut a: T, mut b: T) -> T {
    let r: T = lit(0.618_033_988_749_894_8);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if (b - a).abs() <= T::epsilon().sqrt() * lit::<T>(0.1) * (T::one() + a.abs().max(b.abs())) {
            break;
        }
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d);
        }
    }
    let mid = (a + b) * lit(0.5);
    // Keep the best of the final bracket, which matters on plateaus.
    [mid, c, d].into_iter().fold(mid, |best, x| if f(x) > f(best) { x } else { best })
}

/// Interior local maxima of `f` on a bounded interval: each grid peak is
/// refined by golden section within its neighbouring cells.
pub fn find_local_maxima<T: Real, F: Fn(T) -> T>(f: F, iv: Interval<T>, grid_n: usize) -> Vec<T> {
    let xs = iv.grid(grid_n.max(2));
    let ys: Vec<T> = xs.iter().map(|&x| f(x)).collect();
    let mut out = Vec::new();
    for i in 1..xs.len() - 1 {
        if ys[i] > ys[i - 1] && ys[i] >= ys[i + 1] {
            out.push(golden_max(&f, xs[i - 1], xs[i + 1]));
        }
    }
    out
}

/// Interior local minima, see [`find_local_maxima`].
pub fn find_local_minima<T: Real, F: Fn(T) -> T>(f: F, iv: Interval<T>, grid_n: usize) -> Vec<T> {
    find_local_maxima(|x| -f(x), iv, grid_n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn two_bumps() {
        let f = |x: f64| (-(x - 1.0).powi(2)).exp() + 0.5 * (-(x + 2.0).powi(2) * 4.0).exp();
        let iv = Interval::new(-5.0, 5.0).unwrap();
        let m = find_local_maxima(f, iv, 200);
        assert_eq!(m.len(), 2);
        assert_abs_diff_eq!(m[1], 1.0, epsilon = 1e-6);
        let mins = find_local_minima(f, iv, 200);
        assert_eq!(mins.len(), 1);
    }

    #[test]
    fn monotone_has_no_interior_maximum() {
        let iv = Interval::new(0.0, 1.0).unwrap();
        assert!(find_local_maxima(|x: f64| x, iv, 50).is_empty());
    }

    #[test]
    fn golden_section_on_parabola() {
        let x = golden_max(&|x: f64| -(x - 0.3).powi(2), 0.0, 1.0);
        assert_abs_diff_eq!(x, 0.3, epsilon = 1e-7);
    }
}
