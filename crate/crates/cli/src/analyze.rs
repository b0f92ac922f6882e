//! `skewlab analyze`: summary of one user-specified law `2 f₀(x) G₀(w(x))`.

use std::fmt::Write as _;

use skewlab_core::concavity::{check_sconcave, ConcavityReport, PairConfig};
use skewlab_core::modes::{analyze_modes, ModeReport};
use skewlab_core::{Error, Interval, PerturbationFn, QuadSpec, SkewDensity1D};

use crate::json::{fmt_f64, Json, SCHEMA_VERSION};
use crate::wexpr::{parse_base, parse_w};
use crate::CliError;

pub const QUANTILE_LEVELS: [f64; 5] = [0.05, 0.25, 0.5, 0.75, 0.95];
/// Probability mass left out of each side of the concavity window.
pub const WINDOW_TAIL: f64 = 0.001;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
}

/// Everything `analyze` needs; strings are parsed by [`run`].
#[derive(Debug, Clone, PartialEq)]
pub struct AnalyzeConfig {
    pub base: String,
    pub g0: String,
    pub w: String,
    pub format: Format,
    pub seed: u64,
    pub grid: usize,
    pub pairs: usize,
}

impl Default for AnalyzeConfig {
    fn default() -> Self {
        Self {
            base: "normal".into(),
            g0: "normal".into(),
            w: "linear:0".into(),
            format: Format::Json,
            seed: 0,
            grid: 2000,
            pairs: 2000,
        }
    }
}

/// Structured results before rendering.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub name: String,
    pub normalization: f64,
    pub quantiles: Vec<(f64, f64)>,
    pub moments: Vec<(u32, Result<f64, Error>)>,
    pub modes: ModeReport,
    pub window: (f64, f64),
    pub log_concave: ConcavityReport,
    pub quasi_concave: ConcavityReport,
}

/// Builds the law described by `cfg` and computes every summary.
pub fn analyze(cfg: &AnalyzeConfig, quad: QuadSpec) -> Result<Analysis, CliError> {
    let base = parse_base("--base", &cfg.base)?;
    let g0 = parse_base("--G0", &cfg.g0)?;
    let w = parse_w(&cfg.w)?;
    if cfg.grid < 10 {
        return Err(CliError::Usage(format!("--grid must be at least 10, got {}", cfg.grid)));
    }
    if cfg.pairs == 0 {
        return Err(CliError::Usage("--pairs must be positive".into()));
    }
    let d = SkewDensity1D::with_quad(base, PerturbationFn::compose(g0, w)?, quad)?;
    let quantiles = QUANTILE_LEVELS
        .iter()
        .map(|&p| Ok((p, d.quantile(p)?)))
        .collect::<Result<Vec<_>, Error>>()?;
    let moments = (1..=4).map(|k| (k, d.moment(k))).collect();
    let modes = analyze_modes(&d, cfg.grid)?;
    let lo = d.quantile(WINDOW_TAIL)?;
    let hi = d.quantile(1.0 - WINDOW_TAIL)?;
    let dom = [Interval::new(lo, hi)?];
    let pc = PairConfig {
        n_pairs: cfg.pairs,
        seed: cfg.seed,
        ..PairConfig::default()
    };
    let f = |x: &[f64]| d.pdf(x[0]);
    let log_concave = check_sconcave(&f, 0.0, &dom, &pc)?;
    let quasi_concave = check_sconcave(&f, f64::NEG_INFINITY, &dom, &pc)?;
    Ok(Analysis {
        name: d.name(),
        normalization: d.normalization(),
        quantiles,
        moments,
        modes,
        window: (lo, hi),
        log_concave,
        quasi_concave,
    })
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::MomentUndefined { .. } => "MomentUndefined",
        Error::NonConvergence { .. } => "NonConvergence",
        _ => "Error",
    }
}

fn verdict_json(r: &ConcavityReport) -> Json {
    let witness = r
        .witness
        .as_ref()
        .map(|w| Json::obj().with("x", w.x[0]).with("y", w.y[0]).with("theta", w.theta));
    Json::obj()
        .with("pass", r.pass)
        .with("strict_observed", r.strict_observed)
        .with("min_slack", r.min_slack)
        .with("pairs", r.n_pairs)
        .with("witness", witness)
}

fn to_json(cfg: &AnalyzeConfig, a: &Analysis) -> Json {
    let quantiles: Vec<Json> = a.quantiles.iter().map(|&(p, q)| Json::obj().with("p", p).with("q", q)).collect();
    let moments: Vec<Json> = a
        .moments
        .iter()
        .map(|(k, m)| match m {
            Ok(v) => Json::obj().with("order", *k as i64).with("value", *v),
            Err(e) => Json::obj()
                .with("order", *k as i64)
                .with("error", error_kind(e))
                .with("message", e.to_string()),
        })
        .collect();
    let critical: Vec<Json> = a
        .modes
        .critical_points
        .iter()
        .map(|c| Json::obj().with("x", c.x).with("kind", format!("{:?}", c.kind)))
        .collect();
    let c = &a.modes.conditions;
    let conditions = Json::obj()
        .with("g_monotone_increasing", format!("{:?}", c.g_monotone_increasing))
        .with("f0_unimodal_at_0", format!("{:?}", c.f0_unimodal_at_0))
        .with("h0_increasing", format!("{:?}", c.h0_increasing))
        .with("g_decreasing_on_positive", format!("{:?}", c.g_decreasing_on_positive))
        .with("g_concave_on_positive", format!("{:?}", c.g_concave_on_positive))
        .with("f0_log_concave", format!("{:?}", c.f0_log_concave))
        .with("strict", format!("{:?}", c.strict))
        .with("mirrored", c.mirrored);
    let modes = Json::obj()
        .with("modes", a.modes.modes())
        .with("antimodes", a.modes.antimodes())
        .with("critical_points", critical)
        .with("verdict", format!("{:?}", a.modes.verdict))
        .with("sufficient_conditions", conditions)
        .with("sufficiency_conflict", a.modes.sufficiency_conflict);
    let concavity = Json::obj()
        .with("window", vec![a.window.0, a.window.1])
        .with("seed", cfg.seed)
        .with("log_concave", verdict_json(&a.log_concave))
        .with("quasi_concave", verdict_json(&a.quasi_concave));
    Json::obj()
        .with("schema_version", SCHEMA_VERSION)
        .with("command", "analyze")
        .with("law", a.name.clone())
        .with("base", cfg.base.clone())
        .with("G0", cfg.g0.clone())
        .with("w", cfg.w.clone())
        .with("normalization", a.normalization)
        .with("quantiles", quantiles)
        .with("moments", moments)
        .with("modes", modes)
        .with("concavity", concavity)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn to_csv(a: &Analysis) -> String {
    let mut rows: Vec<(String, String)> = vec![("law".into(), a.name.clone()), ("normalization".into(), fmt_f64(a.normalization))];
    for &(p, q) in &a.quantiles {
        rows.push((format!("quantile_{p}"), fmt_f64(q)));
    }
    for (k, m) in &a.moments {
        let v = match m {
            Ok(v) => fmt_f64(*v),
            Err(e) => error_kind(e).to_string(),
        };
        rows.push((format!("moment_{k}"), v));
    }
    let join = |xs: Vec<f64>| xs.into_iter().map(fmt_f64).collect::<Vec<_>>().join(" ");
    rows.push(("modes".into(), join(a.modes.modes())));
    rows.push(("antimodes".into(), join(a.modes.antimodes())));
    rows.push(("unimodal_verdict".into(), format!("{:?}", a.modes.verdict)));
    rows.push(("log_concave".into(), a.log_concave.pass.to_string()));
    rows.push(("quasi_concave".into(), a.quasi_concave.pass.to_string()));
    let mut out = String::from("quantity,value\n");
    for (k, v) in rows {
        writeln!(out, "{},{}", csv_field(&k), csv_field(&v)).expect("writing to a String");
    }
    out
}

/// Renders the analysis in the requested format.
pub fn run(cfg: &AnalyzeConfig, quad: QuadSpec) -> Result<String, CliError> {
    let a = analyze(cfg, quad)?;
    Ok(match cfg.format {
        Format::Json => to_json(cfg, &a).to_pretty(),
        Format::Csv => to_csv(&a),
    })
}
