//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::f64::consts::PI;
use std::process::Command;
use std::time::Instant;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use skewlab_core::catalog;
use skewlab_core::characterize::{coherence_battery, CharConfig};
use skewlab_core::concavity::{check_sconcave, check_superlevel_convex, PairConfig};
use skewlab_core::modes::{analyze_modes, ma_genton_cross_check, MaGentonVerdict};
use skewlab_core::multivar::{
    subbotin_hessian_trials, two_disc_counterexample, two_disc_k, two_disc_local_maxima, two_disc_nonconvex_level, two_disc_spec, NdBase,
};
use skewlab_core::numerics::ks;
use skewlab_core::ordering::quantile_order;
use skewlab_core::{
    ConditioningSpec, EllipticalGenerator, Esn, Interval, Matrix, OddFn, PerturbationFn, Sep, SkewDensity1D, SkewElliptical, SkewSymmetricNd,
    SubbotinMv, SymmetricBase,
};

const NORMALIZATION_TOL: f64 = 1e-7;
const NORMALIZATION_SECS: f64 = 5.0;
const SURVIVAL_TOL: f64 = 1e-7;
const MOMENT_TOL: f64 = 1e-5;
const KS_LEVEL: f64 = 0.01;
const INVARIANCE_N: usize = 100_000;
const CDF_ORDER_TOL: f64 = 1e-9;
const ORDERING_SECS: f64 = 10.0;
const SPOT_TOL: f64 = 1e-6;
const MC_N: usize = 1_000_000;
const MODE_SECS: f64 = 2.0;
const CLOSED_FORM_TOL: f64 = 1e-6;
const LOW_MAX_TOL: f64 = 0.005;
const HIGH_MAX_TOL: f64 = 1e-6;
const PAIRS: usize = 10_000;
const SCONCAVITY_SECS: f64 = 60.0;
const HESSIAN_FLOOR: f64 = -1e-12;
const ESN_TOL: f64 = 1e-10;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn boxed(d: usize, a: f64) -> Vec<Interval> {
    vec![Interval::new(-a, a).unwrap(); d]
}

fn pairs(seed: u64) -> PairConfig {
    PairConfig {
        n_pairs: PAIRS,
        seed,
        ..PairConfig::default()
    }
}

fn normalization() -> Outcome {
    let t = Instant::now();
    let laws = catalog::univariate::<f64>();
    let worst = laws.iter().map(|(_, d)| (d.normalization() - 1.0).abs()).fold(0.0, f64::max);
    let secs = t.elapsed().as_secs_f64();
    ensure(
        laws.len() == 12 && worst <= NORMALIZATION_TOL && secs < NORMALIZATION_SECS,
        format!("{} laws, max |int f - 1| = {worst:.2e}, {secs:.2}s", laws.len()),
    )
}

fn survival() -> Outcome {
    let c = SymmetricBase::cauchy();
    let l = SymmetricBase::logistic();
    let laws = [
        SkewDensity1D::skew_normal(2.0),
        SkewDensity1D::skew_normal(-1.0),
        SkewDensity1D::new(c, PerturbationFn::compose(c, OddFn::poly(vec![(3, 1.0), (1, -1.0)]).unwrap()).unwrap()).unwrap(),
        SkewDensity1D::new(l, PerturbationFn::compose(SymmetricBase::normal(), OddFn::cubic(1.0, 1.0)).unwrap()).unwrap(),
        SkewDensity1D::new(
            SymmetricBase::student_t(5.0).unwrap(),
            PerturbationFn::compose(l, OddFn::linear(2.0)).unwrap(),
        )
        .unwrap(),
    ];
    let xs = Interval::new(-5.0, 5.0).unwrap().grid(100);
    let mut worst = 0.0f64;
    for d in &laws {
        for &x in &xs {
            let lhs = 1.0 - d.cdf_by_quadrature(-x).map_err(|e| e.to_string())?;
            let rhs = 2.0 * d.base().cdf(x) - d.cdf_by_quadrature(x).map_err(|e| e.to_string())?;
            worst = worst.max((lhs - rhs).abs());
        }
    }
    ensure(
        xs.len() == 101 && worst <= SURVIVAL_TOL,
        format!("5 laws x {} points, max violation {worst:.2e}", xs.len()),
    )
}

fn invariance() -> Outcome {
    let null = SkewDensity1D::new(SymmetricBase::normal(), PerturbationFn::null()).unwrap();
    let abs0: Vec<f64> = null.sample(INVARIANCE_N, 1000).into_iter().map(f64::abs).collect();
    let mut worst_moment = 0.0f64;
    let mut min_p = 1.0f64;
    for (i, alpha) in [-3.0, 1.0, 5.0].into_iter().enumerate() {
        let d = SkewDensity1D::skew_normal(alpha);
        worst_moment = worst_moment.max((d.moment(2).map_err(|e| e.to_string())? - 1.0).abs());
        worst_moment = worst_moment.max((d.moment(4).map_err(|e| e.to_string())? - 3.0).abs());
        let abs: Vec<f64> = d.sample(INVARIANCE_N, 1001 + i as u64).into_iter().map(f64::abs).collect();
        min_p = min_p.min(ks::two_sample(&abs, &abs0).p_value);
    }
    ensure(
        worst_moment <= MOMENT_TOL && min_p > KS_LEVEL,
        format!("max even-moment error {worst_moment:.2e}, min KS p = {min_p:.3}"),
    )
}

fn characterization() -> Outcome {
    let cases = coherence_battery::<f64>(0, 20, &CharConfig::default()).map_err(|e| e.to_string())?;
    let split = cases.iter().filter(|c| !c.report.unanimous()).count();
    let wrong = cases.iter().filter(|c| c.report.all_pass() != c.same_base).count();
    ensure(
        cases.len() == 20 && split == 0 && wrong == 0,
        format!(
            "{} pairs, {split} split verdicts, {wrong} verdicts against the base relation",
            cases.len()
        ),
    )
}

fn ordering() -> Outcome {
    let t = Instant::now();
    let c = SymmetricBase::cauchy();
    let g1 = PerturbationFn::compose(c, OddFn::poly(vec![(3, 1.0), (1, -1.0)]).unwrap()).unwrap();
    let g2 = PerturbationFn::compose(c, OddFn::cubic(0.0, 1.0)).unwrap();
    let xs = Interval::new(-4.0, 4.0).unwrap().grid(400);
    let f1 = SkewDensity1D::new(c, g1.clone()).unwrap().cdf_many(&xs).map_err(|e| e.to_string())?;
    let f2 = SkewDensity1D::new(c, g2.clone()).unwrap().cdf_many(&xs).map_err(|e| e.to_string())?;
    let worst = f1.iter().zip(&f2).map(|(a, b)| b - a).fold(f64::NEG_INFINITY, f64::max);
    let ps: Vec<f64> = (1..=9).map(|i| i as f64 / 10.0).collect();
    let q = quantile_order(&c, &g1, &g2, &ps).map_err(|e| e.to_string())?;
    let q_ok = q.q1.iter().zip(&q.q2).all(|(a, b)| a <= b);
    let secs = t.elapsed().as_secs_f64();
    ensure(
        xs.len() == 401 && worst <= CDF_ORDER_TOL && q_ok && secs < ORDERING_SECS,
        format!(
            "max F2 - F1 = {worst:.2e} over {} points, Q1 <= Q2 at deciles: {q_ok}, {secs:.2}s",
            xs.len()
        ),
    )
}

/// `∫_{−∞}^0 2φ(x)Φ(x) dx` with `Φ` itself by Simpson's rule.
fn double_quadrature_f0() -> f64 {
    let phi = |x: f64| (-x * x / 2.0).exp() / (2.0 * PI).sqrt();
    let (lo, n) = (-12.0, 4000usize);
    let h = -lo / n as f64;
    let weight = |i: usize| {
        if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        }
    };
    let xs: Vec<f64> = (0..=n).map(|i| lo + h * i as f64).collect();
    // Cumulative Φ at every node, one Simpson step per panel.
    let mut big_phi = vec![0.0; n + 1];
    for i in 1..=n {
        let (a, b) = (xs[i - 1], xs[i]);
        let m = (a + b) / 2.0;
        big_phi[i] = big_phi[i - 1] + (b - a) / 6.0 * (phi(a) + 4.0 * phi(m) + phi(b));
    }
    (0..=n).map(|i| weight(i) * 2.0 * phi(xs[i]) * big_phi[i]).sum::<f64>() * h / 3.0
}

/// `P(X ≤ 0)` from the representation `X = δ|U₀| + √(1−δ²) U₁`.
fn monte_carlo_f0(alpha: f64, n: usize) -> f64 {
    let delta = alpha / (1.0 + alpha * alpha).sqrt();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let hits = (0..n)
        .filter(|_| {
            let u0: f64 = StandardNormal.sample(&mut rng);
            let u1: f64 = StandardNormal.sample(&mut rng);
            delta * u0.abs() + (1.0 - delta * delta).sqrt() * u1 <= 0.0
        })
        .count();
    hits as f64 / n as f64
}

fn cdf_spot() -> Outcome {
    let lib = SkewDensity1D::skew_normal(1.0).cdf(0.0).map_err(|e| e.to_string())?;
    let quad = double_quadrature_f0();
    let mc = monte_carlo_f0(1.0, MC_N);
    let se = (0.25f64 * 0.75 / MC_N as f64).sqrt();
    ensure(
        (lib - 0.25).abs() <= SPOT_TOL && (quad - 0.25).abs() <= SPOT_TOL && (lib - quad).abs() <= SPOT_TOL && (mc - lib).abs() <= 4.0 * se,
        format!("library {lib:.9}, double quadrature {quad:.9}, Monte Carlo {mc:.5} (se {se:.1e})"),
    )
}

fn modes() -> Outcome {
    let mut slowest = 0.0f64;
    let mut timed = |f: &dyn Fn() -> Result<(usize, usize), String>| -> Result<(usize, usize), String> {
        let t = Instant::now();
        let r = f();
        slowest = slowest.max(t.elapsed().as_secs_f64());
        r
    };
    let cubic = timed(&|| {
        let n = SymmetricBase::normal();
        let d = SkewDensity1D::new(n, PerturbationFn::compose(n, OddFn::cubic(0.0, 1.0)).unwrap()).unwrap();
        let r = analyze_modes(&d, 2000).map_err(|e| e.to_string())?;
        Ok((r.modes().len(), r.antimodes().len()))
    })?;
    let mg = |a: f64, b: f64, want: MaGentonVerdict| -> Result<(usize, usize), String> {
        let (v, r) = ma_genton_cross_check(a, b, 2000).map_err(|e| e.to_string())?;
        Ok((r.modes().len(), usize::from(v == want)))
    };
    let unimodal = timed(&|| mg(2.0, 1.0, MaGentonVerdict::GuaranteedUnimodal))?;
    let bimodal = timed(&|| mg(0.0, 1.0, MaGentonVerdict::AtMostTwoModes))?;
    ensure(
        cubic == (2, 1) && unimodal == (1, 1) && bimodal == (2, 1) && slowest < MODE_SECS,
        format!(
            "x^3: {} modes {} antimode; (2,1): {} mode; (0,1): {} modes; slowest {slowest:.2}s",
            cubic.0, cubic.1, unimodal.0, bimodal.0
        ),
    )
}

fn counterexample() -> Outcome {
    let z = SkewElliptical::new(EllipticalGenerator::two_disc(), two_disc_spec().unwrap()).unwrap();
    let ys = Interval::new(-4.0, 4.0).unwrap().grid(400);
    let mut worst = 0.0f64;
    for &y in &ys {
        worst = worst.max((z.density(&[y]).map_err(|e| e.to_string())? - two_disc_counterexample(y)).abs());
    }
    let m = two_disc_local_maxima::<f64>();
    let located = m.len() == 2 && (m[0] - 0.699).abs() <= LOW_MAX_TOL && (m[1] - 2.0).abs() <= HIGH_MAX_TOL;
    let k = two_disc_k::<f64>();
    let k_ok = format!("{k:.4}") == "0.0216";
    let closed = |y: &[f64]| two_disc_counterexample(y[0]);
    let level = check_superlevel_convex(&closed, two_disc_nonconvex_level(), &boxed(1, 4.0), 800, 0).map_err(|e| e.to_string())?;
    let q = check_sconcave(&closed, f64::NEG_INFINITY, &boxed(1, 4.0), &pairs(0)).map_err(|e| e.to_string())?;
    let witnessed = !q.pass && q.witness_holds(&closed, PairConfig::default().slack) && !level.pass && level.witness.is_some();
    ensure(
        worst <= CLOSED_FORM_TOL && located && k_ok && witnessed,
        format!("max |closed - quadrature| = {worst:.2e}, maxima {m:?}, k = {k:.6}, quasi-concavity fails with witness: {witnessed}"),
    )
}

fn sconcavity() -> Outcome {
    let t = Instant::now();
    let dens = |z: &SkewElliptical| {
        let z = z.clone();
        move |y: &[f64]| z.density(y).unwrap_or(f64::NAN)
    };
    let run = |f: &(dyn Fn(&[f64]) -> f64 + Sync), s: f64, d: usize, a: f64, seed: u64| {
        check_sconcave(f, s, &boxed(d, a), &pairs(seed)).map_err(|e| e.to_string())
    };
    let sn1 = SkewElliptical::new(EllipticalGenerator::normal(), ConditioningSpec::univariate(0.8).unwrap()).unwrap();
    let om = Matrix::from_rows(&[vec![1.0, 0.25], vec![0.25, 1.0]]).unwrap();
    let sn2 = SkewElliptical::new(EllipticalGenerator::normal(), ConditioningSpec::from_parts(&[0.5, 0.3], &om).unwrap()).unwrap();
    let p2 = SkewElliptical::new(EllipticalGenerator::pearson2(2.0).unwrap(), ConditioningSpec::univariate(0.5).unwrap()).unwrap();
    let st = SkewElliptical::new(
        EllipticalGenerator::student(3.0, 3).unwrap(),
        ConditioningSpec::from_parts(&[0.5, 0.3], &Matrix::identity(2)).unwrap(),
    )
    .unwrap();
    let sn1_log = run(&dens(&sn1), 0.0, 1, 5.0, 1)?;
    let sn2_log = run(&dens(&sn2), 0.0, 2, 4.0, 2)?;
    let p2_third = run(&dens(&p2), 1.0 / 3.0, 1, 1.2, 3)?;
    let st_log = run(&dens(&st), 0.0, 2, 8.0, 4)?;
    let st_half = run(&dens(&st), -0.5, 2, 8.0, 5)?;
    let st_quasi = run(&dens(&st), f64::NEG_INFINITY, 2, 8.0, 6)?;
    let secs = t.elapsed().as_secs_f64();
    let passes = [&sn1_log, &sn2_log, &p2_third, &st_half, &st_quasi];
    let all_pairs = passes.iter().chain([&&st_log]).all(|r| r.n_pairs == PAIRS);
    ensure(
        passes.iter().all(|r| r.pass && r.witness.is_none()) && !st_log.pass && all_pairs && secs < SCONCAVITY_SECS,
        format!(
            "skew-normal d=1,2 log-concave: {}, {}; Pearson II 1/3-concave: {}; Student log-concave: {}, -1/2-concave: {}, quasi-concave: {}; {secs:.1}s",
            sn1_log.pass, sn2_log.pass, p2_third.pass, st_log.pass, st_half.pass, st_quasi.pass
        ),
    )
}

fn subbotin() -> Outcome {
    let mut ok = true;
    for (i, nu) in [1.0, 1.5].into_iter().enumerate() {
        let sep = Sep::with_subbotin_g0(SubbotinMv::new(Matrix::identity(2), nu).unwrap(), vec![1.0, -1.0]).unwrap();
        let r = check_sconcave(&|x: &[f64]| sep.pdf(x), 0.0, &boxed(2, 4.0), &pairs(10 + i as u64)).map_err(|e| e.to_string())?;
        ok &= r.pass;
    }
    let t = subbotin_hessian_trials(0, 1000);
    ensure(
        ok && t.trials == 1000 && t.min_form >= HESSIAN_FLOOR,
        format!("nu = 1, 1.5 log-concave: {ok}; min u'Mu over {} trials = {:.3e}", t.trials, t.min_form),
    )
}

fn esn() -> Outcome {
    let om = Matrix::from_rows(&[vec![1.0, 0.4], vec![0.4, 2.0]]).unwrap();
    let e = Esn::new(&om, vec![1.5, -0.5], 0.0).unwrap();
    let sn = SkewSymmetricNd::new(NdBase::normal(&om).unwrap(), SymmetricBase::normal(), vec![1.5, -0.5]).unwrap();
    let grid = Interval::new(-3.0, 3.0).unwrap().grid(24);
    let mut worst = 0.0f64;
    for &a in &grid {
        for &b in &grid {
            worst = worst.max((e.pdf(&[a, b]) - sn.pdf(&[a, b])).abs());
        }
    }
    let e1 = Esn::new(&Matrix::identity(1), vec![2.0], 1.0).unwrap();
    let r = check_sconcave(&|x: &[f64]| e1.pdf(x), 0.0, &boxed(1, 6.0), &pairs(20)).map_err(|e| e.to_string())?;
    ensure(
        worst <= ESN_TOL && r.pass,
        format!("tau=0 max diff {worst:.2e}; d=1 log-concave: {}", r.pass),
    )
}

fn determinism() -> Outcome {
    let run = || {
        let out = Command::new(env!("CARGO_BIN_EXE_skewlab"))
            .args(["verify", "all", "--seed", "0"])
            .env_remove("SKEWLAB_QUAD_TOL")
            .output()
            .map_err(|e| e.to_string())?;
        Ok::<_, String>((out.status.code(), out.stdout))
    };
    let (c1, a) = run()?;
    let (c2, b) = run()?;
    ensure(
        c1 == Some(0) && c2 == Some(0) && a == b && !a.is_empty(),
        format!("exit codes {c1:?}, {c2:?}; {} bytes; identical: {}", a.len(), a == b),
    )
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("normalization", normalization),
        ("survival identity", survival),
        ("perturbation invariance", invariance),
        ("characterization coherence", characterization),
        ("stochastic ordering", ordering),
        ("skew-normal cdf spot value", cdf_spot),
        ("mode structure", modes),
        ("two-disc counterexample", counterexample),
        ("s-concavity program", sconcavity),
        ("multivariate Subbotin", subbotin),
        ("extended skew-normal", esn),
        ("determinism", determinism),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (tag, detail) = match run() {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failures += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag} {name}: {detail}", i + 1);
    }
    println!("{} of {} criteria pass", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
