//! Property suites behind `skewlab verify`.
//!
//! Every suite returns a list of named checks; a suite passes when all of
//! its checks pass. Computation errors become failing checks so that one
//! broken suite does not hide the others.

use skewlab_core::catalog;
use skewlab_core::characterize::{coherence_battery, CharConfig};
use skewlab_core::concavity::{check_sconcave, check_superlevel_convex, marginal_exponent, ConcavityReport, LevelSetReport, PairConfig};
use skewlab_core::modes::{analyze_modes, ma_genton_cross_check, MaGentonVerdict, UnimodalVerdict};
use skewlab_core::multivar::{
    subbotin_hessian_trials, two_disc_counterexample, two_disc_k, two_disc_local_maxima, two_disc_nonconvex_level, two_disc_spec, NdBase,
};
use skewlab_core::numerics::{ks, substream_seed};
use skewlab_core::ordering::{compare_gr, quantile_order, stochastic_order_on, Relation};
use skewlab_core::{
    ConditioningSpec, EllipticalGenerator, Esn, Interval, Matrix, OddFn, PerturbationFn, QuadSpec, Sep, SkewDensity1D, SkewElliptical,
    SkewSymmetricNd, SubbotinMv, SymmetricBase,
};

use crate::json::{Json, SCHEMA_VERSION};
use crate::{CliError, Outcome};

/// Suite names in the order `all` runs them.
pub const SUITES: [&str; 12] = [
    "normalization",
    "survival",
    "invariance",
    "characterization",
    "ordering",
    "modes",
    "sconcavity-skewnormal",
    "sconcavity-pearson2",
    "sconcavity-student",
    "counterexample",
    "subbotin",
    "esn",
];

/// Random pairs per s-concavity check.
pub const PAIRS: usize = 10_000;
pub const NORMALIZATION_TOL: f64 = 1e-7;
pub const SURVIVAL_TOL: f64 = 1e-7;
pub const SPOT_TOL: f64 = 1e-6;
pub const MOMENT_TOL: f64 = 1e-5;
pub const KS_LEVEL: f64 = 0.01;
pub const INVARIANCE_N: usize = 100_000;
pub const ORDER_TOL: f64 = 1e-9;
pub const CLOSED_FORM_TOL: f64 = 1e-6;
pub const HESSIAN_FLOOR: f64 = -1e-12;
pub const HESSIAN_TRIALS: usize = 1000;
pub const ESN_TOL: f64 = 1e-10;
pub const MODE_GRID: usize = 2000;

struct Check {
    pass: bool,
    json: Json,
}

fn check(name: &str, pass: bool) -> Check {
    Check {
        pass,
        json: Json::obj().with("name", name).with("pass", pass),
    }
}

impl Check {
    fn with(mut self, key: &str, value: impl Into<Json>) -> Self {
        self.json = self.json.with(key, value);
        self
    }
}

fn failed(name: &str, err: impl std::fmt::Display) -> Check {
    check(name, false).with("error", err.to_string())
}

fn guard(name: &str, body: impl FnOnce() -> Result<Check, skewlab_core::Error>) -> Check {
    body().unwrap_or_else(|e| failed(name, e))
}

fn boxed(d: usize, a: f64) -> Vec<Interval> {
    vec![Interval::new(-a, a).expect("a > 0"); d]
}

fn pairs(seed: u64) -> PairConfig {
    PairConfig {
        n_pairs: PAIRS,
        seed,
        ..PairConfig::default()
    }
}

fn concavity_json(r: &ConcavityReport) -> Json {
    let witness = r.witness.as_ref().map(|w| {
        Json::obj()
            .with("x", w.x.clone())
            .with("y", w.y.clone())
            .with("theta", w.theta)
            .with("lhs", w.lhs)
            .with("rhs", w.rhs)
    });
    Json::obj()
        .with("property", r.property.label())
        .with("s", r.property.s())
        .with("pass", r.pass)
        .with("strict_observed", r.strict_observed)
        .with("min_slack", r.min_slack)
        .with("pairs", r.n_pairs)
        .with("seed", r.seed)
        .with("domain", r.domain.iter().map(|&(a, b)| Json::from(vec![a, b])).collect::<Vec<_>>())
        .with("witness", witness)
}

fn level_json(r: &LevelSetReport) -> Json {
    let witness = r.witness.as_ref().map(|w| {
        Json::obj()
            .with("a", w.a.clone())
            .with("b", w.b.clone())
            .with("midpoint", w.midpoint.clone())
            .with("f_midpoint", w.f_midpoint)
    });
    Json::obj()
        .with("level", r.level)
        .with("convex", r.pass)
        .with("points_in_set", r.points_in_set)
        .with("pairs_checked", r.pairs_checked)
        .with("witness", witness)
}

/// A concavity check that must hold (`expect = true`) or must fail with a
/// witness (`expect = false`).
fn concavity_check<F>(name: &str, f: &F, s: f64, domain: &[Interval], seed: u64, expect: bool) -> Check
where
    F: Fn(&[f64]) -> f64 + Sync,
{
    guard(name, || {
        let r = check_sconcave(f, s, domain, &pairs(seed))?;
        let pass = if expect {
            r.pass
        } else {
            !r.pass && r.witness_holds(f, PairConfig::default().slack)
        };
        Ok(check(name, pass).with("expected_pass", expect).with("report", concavity_json(&r)))
    })
}

fn normalization() -> Vec<Check> {
    catalog::univariate::<f64>()
        .into_iter()
        .map(|(name, d)| {
            let total = d.normalization();
            check(&format!("integral of {name}"), (total - 1.0).abs() <= NORMALIZATION_TOL)
                .with("integral", total)
                .with("tolerance", NORMALIZATION_TOL)
        })
        .collect()
}

/// The five laws of the survival check.
pub fn survival_laws() -> Result<Vec<(String, SkewDensity1D)>, skewlab_core::Error> {
    let c = SymmetricBase::cauchy();
    let l = SymmetricBase::logistic();
    let t5 = SymmetricBase::student_t(5.0)?;
    Ok(vec![
        ("skew-normal(2)".into(), SkewDensity1D::skew_normal(2.0)),
        ("skew-normal(-1)".into(), SkewDensity1D::skew_normal(-1.0)),
        (
            "cauchy/cauchy x^3-x".into(),
            SkewDensity1D::new(c, PerturbationFn::compose(c, OddFn::poly(vec![(3, 1.0), (1, -1.0)])?)?)?,
        ),
        (
            "logistic/normal x+x^3".into(),
            SkewDensity1D::new(l, PerturbationFn::compose(SymmetricBase::normal(), OddFn::cubic(1.0, 1.0))?)?,
        ),
        (
            "t5/logistic 2x".into(),
            SkewDensity1D::new(t5, PerturbationFn::compose(l, OddFn::linear(2.0))?)?,
        ),
    ])
}

/// Points of the survival check: 101 equally spaced on `[−5, 5]`.
pub fn survival_points() -> Vec<f64> {
    Interval::new(-5.0, 5.0).expect("ordered").grid(100)
}

/// Largest `|1 − F(−x) − 2F₀(x) + F(x)|` with both `F` values by direct
/// quadrature, and the point where it occurs.
pub fn survival_violation(d: &SkewDensity1D, xs: &[f64]) -> Result<(f64, f64), skewlab_core::Error> {
    let mut worst = (0.0, xs[0]);
    for &x in xs {
        let lhs = 1.0 - d.cdf_by_quadrature(-x)?;
        let rhs = 2.0 * d.base().cdf(x) - d.cdf_by_quadrature(x)?;
        let v = (lhs - rhs).abs();
        if v > worst.0 {
            worst = (v, x);
        }
    }
    Ok(worst)
}

fn survival() -> Vec<Check> {
    let mut out = match survival_laws() {
        Err(e) => vec![failed("survival laws", e)],
        Ok(laws) => {
            let xs = survival_points();
            laws.iter()
                .map(|(name, d)| {
                    let label = format!("survival identity for {name}");
                    guard(&label, || {
                        let (v, at) = survival_violation(d, &xs)?;
                        Ok(check(&label, v <= SURVIVAL_TOL)
                            .with("max_violation", v)
                            .with("at", at)
                            .with("points", xs.len()))
                    })
                })
                .collect()
        }
    };
    out.push(guard("skew-normal(1) cdf at 0", || {
        let v = SkewDensity1D::skew_normal(1.0).cdf(0.0)?;
        Ok(check("skew-normal(1) cdf at 0", (v - 0.25).abs() <= SPOT_TOL)
            .with("value", v)
            .with("expected", 0.25))
    }));
    out
}

fn invariance(seed: u64) -> Vec<Check> {
    let null = match SkewDensity1D::new(SymmetricBase::normal(), PerturbationFn::null()) {
        Ok(d) => d,
        Err(e) => return vec![failed("base law", e)],
    };
    let mut abs0: Vec<f64> = null.sample(INVARIANCE_N, substream_seed(seed, 100)).into_iter().map(f64::abs).collect();
    abs0.sort_by(f64::total_cmp);
    let mut out = Vec::new();
    for (i, alpha) in [-3.0, 1.0, 5.0].into_iter().enumerate() {
        let d = SkewDensity1D::skew_normal(alpha);
        for (k, expected) in [(2u32, 1.0), (4, 3.0)] {
            let name = format!("E X^{k} of skew-normal({alpha})");
            out.push(guard(&name, || {
                let m = d.moment(k)?;
                Ok(check(&name, (m - expected).abs() <= MOMENT_TOL)
                    .with("moment", m)
                    .with("expected", expected))
            }));
        }
        let abs: Vec<f64> = d
            .sample(INVARIANCE_N, substream_seed(seed, 101 + i as u64))
            .into_iter()
            .map(f64::abs)
            .collect();
        let r = ks::two_sample(&abs, &abs0);
        out.push(
            check(&format!("KS |X| vs |X0| for skew-normal({alpha})"), r.passes(KS_LEVEL))
                .with("statistic", r.statistic)
                .with("p_value", r.p_value)
                .with("n", INVARIANCE_N)
                .with("level", KS_LEVEL),
        );
    }
    out
}

fn characterization(seed: u64) -> Vec<Check> {
    let cfg = CharConfig {
        seed,
        ..CharConfig::default()
    };
    match coherence_battery::<f64>(seed, 20, &cfg) {
        Err(e) => vec![failed("coherence battery", e)],
        Ok(cases) => cases
            .iter()
            .map(|c| {
                let verdicts: Vec<Json> = c
                    .report
                    .verdicts
                    .iter()
                    .map(|v| {
                        Json::obj()
                            .with("condition", v.condition.to_string())
                            .with("pass", v.pass)
                            .with("statistic", v.statistic)
                            .with("witness", v.witness.clone())
                    })
                    .collect();
                let coherent = c.report.unanimous() && c.report.all_pass() == c.same_base;
                check(&format!("{} vs {}", c.f_name, c.h_name), coherent)
                    .with("same_base", c.same_base)
                    .with("unanimous", c.report.unanimous())
                    .with("verdicts", verdicts)
            })
            .collect(),
    }
}

fn figure1_pair() -> Result<(SymmetricBase, PerturbationFn, PerturbationFn), skewlab_core::Error> {
    let c = SymmetricBase::cauchy();
    let g1 = PerturbationFn::compose(c, OddFn::poly(vec![(3, 1.0), (1, -1.0)])?)?;
    let g2 = PerturbationFn::compose(c, OddFn::cubic(0.0, 1.0))?;
    Ok((c, g1, g2))
}

fn ordering(quad: QuadSpec) -> Vec<Check> {
    let (c, g1, g2) = match figure1_pair() {
        Ok(t) => t,
        Err(e) => return vec![failed("figure 1 laws", e)],
    };
    let mut out = Vec::new();
    let pos = Interval::new(0.0, 50.0).expect("ordered");
    let v = compare_gr(&g1, &g2, pos, 401);
    out.push(
        check("G2 >=GR G1", v.relation == Relation::G2GrG1 && v.consistent)
            .with("relation", format!("{:?}", v.relation))
            .with("strict", v.strict)
            .with("min_gap", v.min_gap)
            .with("max_gap", v.max_gap),
    );
    out.push(guard("F1 >= F2 on 401 points", || {
        let xs = Interval::new(-4.0, 4.0)?.grid(400);
        let d1 = SkewDensity1D::with_quad(c, g1.clone(), quad)?;
        let d2 = SkewDensity1D::with_quad(c, g2.clone(), quad)?;
        let f1 = d1.cdf_many(&xs)?;
        let f2 = d2.cdf_many(&xs)?;
        let worst = f1.iter().zip(&f2).map(|(a, b)| b - a).fold(f64::NEG_INFINITY, f64::max);
        let library = stochastic_order_on(&c, &g1, &g2, &xs)?;
        Ok(check("F1 >= F2 on 401 points", worst <= ORDER_TOL && library.pass)
            .with("max_F2_minus_F1", worst)
            .with("tolerance", ORDER_TOL))
    }));
    out.push(guard("Q1 <= Q2 at deciles", || {
        let ps: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
        let r = quantile_order(&c, &g1, &g2, &ps)?;
        Ok(check("Q1 <= Q2 at deciles", r.pass).with("p", r.ps).with("q1", r.q1).with("q2", r.q2))
    }));
    out
}

fn modes() -> Vec<Check> {
    let mut out = Vec::new();
    out.push(guard("w = x^3 has two modes and one antimode", || {
        let n = SymmetricBase::normal();
        let d = SkewDensity1D::new(n, PerturbationFn::compose(n, OddFn::cubic(0.0, 1.0))?)?;
        let r = analyze_modes(&d, MODE_GRID)?;
        Ok(
            check("w = x^3 has two modes and one antimode", r.modes().len() == 2 && r.antimodes().len() == 1)
                .with("modes", r.modes())
                .with("antimodes", r.antimodes()),
        )
    }));
    for (alpha, beta, verdict, count) in [
        (2.0, 1.0, MaGentonVerdict::GuaranteedUnimodal, 1),
        (0.0, 1.0, MaGentonVerdict::AtMostTwoModes, 2),
    ] {
        let name = format!("cubic weight alpha={alpha} beta={beta}");
        out.push(guard(&name, || {
            let (v, r) = ma_genton_cross_check(alpha, beta, MODE_GRID)?;
            Ok(check(&name, v == verdict && r.modes().len() == count)
                .with("criterion", format!("{v:?}"))
                .with("modes", r.modes()))
        }));
    }
    out.push(guard("skew-normal(3) is guaranteed unimodal", || {
        let r = analyze_modes(&SkewDensity1D::skew_normal(3.0), MODE_GRID)?;
        Ok(check(
            "skew-normal(3) is guaranteed unimodal",
            r.verdict == UnimodalVerdict::Guaranteed && r.modes().len() == 1,
        )
        .with("verdict", format!("{:?}", r.verdict))
        .with("modes", r.modes()))
    }));
    out
}

fn density(z: &SkewElliptical) -> impl Fn(&[f64]) -> f64 + Sync + '_ {
    move |y: &[f64]| z.density(y).unwrap_or(f64::NAN)
}

fn sconcavity_skewnormal(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    match ConditioningSpec::univariate(0.8).and_then(|s| SkewElliptical::new(EllipticalGenerator::normal(), s)) {
        Ok(z) => out.push(concavity_check(
            "d=1 log-concave",
            &density(&z),
            0.0,
            &boxed(1, 5.0),
            substream_seed(seed, 200),
            true,
        )),
        Err(e) => out.push(failed("d=1 log-concave", e)),
    }
    let two = Matrix::from_rows(&[vec![1.0, 0.25], vec![0.25, 1.0]])
        .and_then(|om| ConditioningSpec::from_parts(&[0.5, 0.3], &om))
        .and_then(|s| SkewElliptical::new(EllipticalGenerator::normal(), s));
    match two {
        Ok(z) => out.push(concavity_check(
            "d=2 log-concave",
            &density(&z),
            0.0,
            &boxed(2, 4.0),
            substream_seed(seed, 201),
            true,
        )),
        Err(e) => out.push(failed("d=2 log-concave", e)),
    }
    out
}

fn sconcavity_pearson2(seed: u64) -> Vec<Check> {
    let z = EllipticalGenerator::pearson2(2.0).and_then(|g| SkewElliptical::new(g, ConditioningSpec::univariate(0.5)?));
    match z {
        Ok(z) => vec![concavity_check(
            "nu=2 d=1 is 1/3-concave",
            &density(&z),
            1.0 / 3.0,
            &boxed(1, 1.2),
            substream_seed(seed, 300),
            true,
        )],
        Err(e) => vec![failed("nu=2 d=1 is 1/3-concave", e)],
    }
}

fn sconcavity_student(seed: u64) -> Vec<Check> {
    let (d, nu) = (2usize, 3.0);
    let built = EllipticalGenerator::student(nu, d + 1)
        .and_then(|g| Ok((g, ConditioningSpec::from_parts(&[0.5, 0.3], &Matrix::identity(d))?)))
        .and_then(|(g, s)| Ok((g.s_concavity(), SkewElliptical::new(g, s)?)));
    let (s, z) = match built {
        Ok(t) => t,
        Err(e) => return vec![failed("student generator", e)],
    };
    let mut out = Vec::new();
    let s1 = s
        .ok_or_else(|| skewlab_core::Error::BadParam("generator has no s-concavity exponent".into()))
        .and_then(|s| marginal_exponent(s, 1));
    let expected = -2.0 / (d as f64 + nu - 1.0);
    match s1 {
        Ok(s1) => out.push(
            check("marginal exponent s1", (s1 - expected).abs() <= 1e-12)
                .with("s", s.unwrap_or(f64::NAN))
                .with("s1", s1)
                .with("expected", expected),
        ),
        Err(e) => out.push(failed("marginal exponent s1", e)),
    }
    let f = density(&z);
    let dom = boxed(d, 8.0);
    out.push(concavity_check("not log-concave", &f, 0.0, &dom, substream_seed(seed, 400), false));
    out.push(concavity_check("s1-concave", &f, expected, &dom, substream_seed(seed, 401), true));
    out.push(concavity_check(
        "quasi-concave",
        &f,
        f64::NEG_INFINITY,
        &dom,
        substream_seed(seed, 402),
        true,
    ));
    out
}

fn counterexample(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    let k = two_disc_k::<f64>();
    out.push(check("k rounds to 0.0216", (k * 1e4).round() == 216.0).with("k", k));
    let z = match two_disc_spec().and_then(|s| SkewElliptical::new(EllipticalGenerator::two_disc(), s)) {
        Ok(z) => z,
        Err(e) => {
            out.push(failed("two-disc law", e));
            return out;
        }
    };
    out.push(guard("closed form matches conditioning", || {
        let ys = Interval::new(-4.0, 4.0)?.grid(160);
        let mut worst = (0.0, ys[0]);
        for &y in &ys {
            let v = (z.density(&[y])? - two_disc_counterexample(y)).abs();
            if v > worst.0 {
                worst = (v, y);
            }
        }
        Ok(check("closed form matches conditioning", worst.0 <= CLOSED_FORM_TOL)
            .with("max_abs_diff", worst.0)
            .with("at", worst.1)
            .with("points", ys.len()))
    }));
    let maxima = two_disc_local_maxima::<f64>();
    let located = maxima.len() == 2 && (maxima[0] - 0.699).abs() <= 0.005 && (maxima[1] - 2.0).abs() <= 1e-6;
    out.push(check("local maxima near 0.699 and at 2", located).with("maxima", maxima));
    let closed = |y: &[f64]| two_disc_counterexample(y[0]);
    let u = two_disc_nonconvex_level::<f64>();
    out.push(guard("super-level set is not convex", || {
        let r = check_superlevel_convex(&closed, u, &boxed(1, 4.0), 800, substream_seed(seed, 500))?;
        Ok(check("super-level set is not convex", !r.pass && r.witness.is_some()).with("report", level_json(&r)))
    }));
    out.push(concavity_check(
        "quasi-concavity fails",
        &closed,
        f64::NEG_INFINITY,
        &boxed(1, 4.0),
        substream_seed(seed, 501),
        false,
    ));
    out
}

fn subbotin(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    for (i, nu) in [1.0, 1.5].into_iter().enumerate() {
        let name = format!("nu={nu} d=2 log-concave");
        match SubbotinMv::new(Matrix::identity(2), nu).and_then(|b| Sep::with_subbotin_g0(b, vec![1.0, -1.0])) {
            Ok(sep) => out.push(concavity_check(
                &name,
                &|x: &[f64]| sep.pdf(x),
                0.0,
                &boxed(2, 4.0),
                substream_seed(seed, 600 + i as u64),
                true,
            )),
            Err(e) => out.push(failed(&name, e)),
        }
    }
    let t = subbotin_hessian_trials(substream_seed(seed, 610), HESSIAN_TRIALS);
    out.push(
        check("Hessian quadratic form nonnegative", t.min_form >= HESSIAN_FLOOR)
            .with("trials", t.trials)
            .with("min_form", t.min_form)
            .with("floor", HESSIAN_FLOOR),
    );
    out
}

fn esn(seed: u64) -> Vec<Check> {
    let mut out = Vec::new();
    out.push(guard("tau=0 reduces to skew-normal", || {
        let om = Matrix::from_rows(&[vec![1.0, 0.4], vec![0.4, 2.0]])?;
        let alpha = vec![1.5, -0.5];
        let e = Esn::new(&om, alpha.clone(), 0.0)?;
        let sn = SkewSymmetricNd::new(NdBase::normal(&om)?, SymmetricBase::normal(), alpha)?;
        let pts = Interval::new(-3.0, 3.0)?.grid(24);
        let mut worst = 0.0f64;
        for &a in &pts {
            for &b in &pts {
                worst = worst.max((e.pdf(&[a, b]) - sn.pdf(&[a, b])).abs());
            }
        }
        Ok(check("tau=0 reduces to skew-normal", worst <= ESN_TOL)
            .with("max_abs_diff", worst)
            .with("tolerance", ESN_TOL))
    }));
    match Esn::new(&Matrix::identity(1), vec![2.0], 1.0) {
        Ok(e) => out.push(concavity_check(
            "d=1 log-concave",
            &|x: &[f64]| e.pdf(x),
            0.0,
            &boxed(1, 6.0),
            substream_seed(seed, 700),
            true,
        )),
        Err(e) => out.push(failed("d=1 log-concave", e)),
    }
    out
}

fn run_suite(name: &str, seed: u64, quad: QuadSpec) -> Vec<Check> {
    match name {
        "normalization" => normalization(),
        "survival" => survival(),
        "invariance" => invariance(seed),
        "characterization" => characterization(seed),
        "ordering" => ordering(quad),
        "modes" => modes(),
        "sconcavity-skewnormal" => sconcavity_skewnormal(seed),
        "sconcavity-pearson2" => sconcavity_pearson2(seed),
        "sconcavity-student" => sconcavity_student(seed),
        "counterexample" => counterexample(seed),
        "subbotin" => subbotin(seed),
        "esn" => esn(seed),
        other => unreachable!("suite {other} is validated before dispatch"),
    }
}

/// Runs `suite` (or every suite for `all`) and renders the JSON report.
pub fn run(suite: &str, seed: u64, quad: QuadSpec) -> Result<Outcome, CliError> {
    let names: Vec<&str> = if suite == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&suite) {
        vec![suite]
    } else {
        return Err(CliError::Usage(format!(
            "unknown suite {suite:?}; expected one of: all, {}",
            SUITES.join(", ")
        )));
    };
    let mut all_pass = true;
    let mut reports = Vec::new();
    for name in names {
        let checks = run_suite(name, seed, quad);
        let pass = checks.iter().all(|c| c.pass);
        all_pass &= pass;
        reports.push(
            Json::obj()
                .with("name", name)
                .with("pass", pass)
                .with("checks", checks.into_iter().map(|c| c.json).collect::<Vec<_>>()),
        );
    }
    let report = Json::obj()
        .with("schema_version", SCHEMA_VERSION)
        .with("command", "verify")
        .with("suite", suite)
        .with("seed", seed)
        .with("pass", all_pass)
        .with("suites", reports);
    Ok(Outcome {
        stdout: report.to_pretty(),
        pass: all_pass,
    })
}
