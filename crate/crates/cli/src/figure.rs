//! Data files behind the three figures.
//!
//! * `figure1.csv`: `x, G1, G2, F1, F2` on `[−4, 4]` for a Cauchy base and
//!   Cauchy `G₀` with `w₁ = x³ − x`, `w₂ = x³`.
//! * `figure2.csv`: `x, h0, g, h_g, f` on `[−3, 3]` for `2φ(x)Φ(x³)`.
//! * `figure3.csv`: `y, f_Z` on `[−4, 4]` for the two-disc law.

use std::fs;
use std::path::Path;

use skewlab_core::multivar::{two_disc_counterexample, two_disc_local_maxima};
use skewlab_core::perturb::{OddFn, PerturbationFn};
use skewlab_core::{Interval, QuadSpec, SkewDensity1D, SymmetricBase};

use crate::json::{csv, Json, SCHEMA_VERSION};
use crate::{CliError, Outcome};

/// Points per figure.
pub const FIGURE_POINTS: usize = 401;
/// Allowed `F₂ − F₁` in the first figure.
pub const CDF_SLACK: f64 = 1e-9;

fn grid(a: f64, b: f64) -> Vec<f64> {
    Interval::new(a, b).expect("a < b").grid(FIGURE_POINTS - 1)
}

/// Interior grid points strictly above both neighbours.
pub fn grid_local_maxima(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    (1..ys.len().saturating_sub(1))
        .filter(|&i| ys[i] > ys[i - 1] && ys[i] > ys[i + 1])
        .map(|i| xs[i])
        .collect()
}

fn figure1(quad: QuadSpec) -> Result<(String, Json, bool), CliError> {
    let c = SymmetricBase::cauchy();
    let w1 = OddFn::poly(vec![(3, 1.0), (1, -1.0)])?;
    let w2 = OddFn::cubic(0.0, 1.0);
    let g1 = PerturbationFn::compose(c, w1)?;
    let g2 = PerturbationFn::compose(c, w2)?;
    let d1 = SkewDensity1D::with_quad(c, g1.clone(), quad)?;
    let d2 = SkewDensity1D::with_quad(c, g2.clone(), quad)?;
    let xs = grid(-4.0, 4.0);
    let f1 = d1.cdf_many(&xs)?;
    let f2 = d2.cdf_many(&xs)?;
    let rows: Vec<Vec<f64>> = (0..xs.len()).map(|i| vec![xs[i], g1.eval(xs[i]), g2.eval(xs[i]), f1[i], f2[i]]).collect();
    let (worst, at) = (0..xs.len())
        .map(|i| (f2[i] - f1[i], xs[i]))
        .fold((f64::NEG_INFINITY, 0.0), |a, b| if b.0 > a.0 { b } else { a });
    let pass = worst <= CDF_SLACK;
    let check = Json::obj()
        .with("name", "F1 >= F2 at every point")
        .with("pass", pass)
        .with("max_F2_minus_F1", worst)
        .with("at", at)
        .with("tolerance", CDF_SLACK);
    Ok((csv(&["x", "G1", "G2", "F1", "F2"], &rows), check, pass))
}

fn figure2(quad: QuadSpec) -> Result<(String, Json, bool), CliError> {
    let n = SymmetricBase::normal();
    let g = PerturbationFn::compose(n, OddFn::cubic(0.0, 1.0))?;
    let d = SkewDensity1D::with_quad(n, g.clone(), quad)?;
    let xs = grid(-3.0, 3.0);
    let rows: Vec<Vec<f64>> = xs
        .iter()
        .map(|&x| vec![x, n.h0(x), g.density(x).unwrap_or(f64::NAN), g.log_slope(x).unwrap_or(f64::NAN), d.pdf(x)])
        .collect();
    let f: Vec<f64> = rows.iter().map(|r| r[4]).collect();
    let maxima = grid_local_maxima(&xs, &f);
    let pass = maxima.len() == 2;
    let check = Json::obj()
        .with("name", "f has two local maxima")
        .with("pass", pass)
        .with("local_maxima", maxima);
    Ok((csv(&["x", "h0", "g", "h_g", "f"], &rows), check, pass))
}

fn figure3() -> Result<(String, Json, bool), CliError> {
    let ys = grid(-4.0, 4.0);
    let rows: Vec<Vec<f64>> = ys.iter().map(|&y| vec![y, two_disc_counterexample(y)]).collect();
    let f: Vec<f64> = rows.iter().map(|r| r[1]).collect();
    let on_grid = grid_local_maxima(&ys, &f);
    let refined = two_disc_local_maxima::<f64>();
    let pass = refined.len() == 2 && (refined[0] - 0.699).abs() <= 0.005 && (refined[1] - 2.0).abs() <= 1e-6;
    let check = Json::obj()
        .with("name", "local maxima near 0.699 and at 2")
        .with("pass", pass)
        .with("grid_maxima", on_grid)
        .with("refined_maxima", refined);
    Ok((csv(&["y", "f_Z"], &rows), check, pass))
}

/// Writes `figure{n}.csv` into `out` and reports the figure's property.
pub fn run(n: u8, out: &Path, quad: QuadSpec) -> Result<Outcome, CliError> {
    let (text, check, pass) = match n {
        1 => figure1(quad)?,
        2 => figure2(quad)?,
        3 => figure3()?,
        other => return Err(CliError::Usage(format!("figure must be 1, 2 or 3, got {other}"))),
    };
    fs::create_dir_all(out)?;
    let file = format!("figure{n}.csv");
    fs::write(out.join(&file), &text)?;
    let report = Json::obj()
        .with("schema_version", SCHEMA_VERSION)
        .with("command", "figure")
        .with("figure", n as i64)
        .with("file", file)
        .with("rows", FIGURE_POINTS)
        .with("pass", pass)
        .with("checks", vec![check]);
    Ok(Outcome {
        stdout: report.to_pretty(),
        pass,
    })
}
