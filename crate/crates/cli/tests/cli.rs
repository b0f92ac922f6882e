use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn skewlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_skewlab"))
        .args(args)
        .env_remove("SKEWLAB_QUAD_TOL")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn num(v: &Value) -> f64 {
    v.as_f64().expect("number")
}

#[test]
fn figures_write_401_rows_with_headers() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("nested");
    let headers = ["x,G1,G2,F1,F2", "x,h0,g,h_g,f", "y,f_Z"];
    for (n, header) in (1..=3).zip(headers) {
        let o = skewlab(&["figure", &n.to_string(), "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let report = json(&o);
        assert_eq!(report["schema_version"], 1);
        assert_eq!(report["pass"], true);
        let text = fs::read_to_string(out.join(format!("figure{n}.csv"))).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], header);
        assert_eq!(lines.len(), 402);
        let first: Vec<&str> = lines[1].split(',').collect();
        assert_eq!(first.len(), header.split(',').count());
        // 17 significant digits: one leading digit and 16 after the point.
        let mantissa = first[0].trim_start_matches('-').split('e').next().unwrap();
        assert_eq!(mantissa.len(), 18, "{mantissa}");
    }
}

#[test]
fn figure_files_are_byte_identical_across_runs() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for dir in [&a, &b] {
        for n in ["1", "2", "3"] {
            assert!(skewlab(&["figure", n, "--out", dir.path().to_str().unwrap()]).status.success());
        }
    }
    for n in 1..=3 {
        let name = format!("figure{n}.csv");
        assert_eq!(fs::read(a.path().join(&name)).unwrap(), fs::read(b.path().join(&name)).unwrap());
    }
}

#[test]
fn figure_three_maxima() {
    let dir = tempfile::tempdir().unwrap();
    let o = skewlab(&["figure", "3", "--out", dir.path().to_str().unwrap()]);
    let maxima = json(&o)["checks"][0]["refined_maxima"]
        .as_array()
        .unwrap()
        .iter()
        .map(num)
        .collect::<Vec<_>>();
    assert_eq!(maxima.len(), 2);
    assert!((maxima[0] - 0.699).abs() <= 0.005 && (maxima[1] - 2.0).abs() <= 1e-6, "{maxima:?}");
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(skewlab(&["verify", "nonsense"]).status.code(), Some(2));
    assert_eq!(skewlab(&["figure", "4", "--out", "x"]).status.code(), Some(2));
    assert_eq!(skewlab(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(skewlab(&["analyze", "--w", "x^2"]).status.code(), Some(2));
    assert_eq!(skewlab(&["--help"]).status.code(), Some(0));
    let o = Command::new(env!("CARGO_BIN_EXE_skewlab"))
        .args(["verify", "modes"])
        .env("SKEWLAB_QUAD_TOL", "abc")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parse_errors_report_the_column() {
    let o = skewlab(&["analyze", "--w", "poly:x^3-x^2"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("--w") && err.contains("column 12"), "{err}");
    let o = skewlab(&["analyze", "--G0", "cauchy:x"]);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("--G0") && err.contains("column 8"), "{err}");
}

#[test]
fn verify_reports_and_exit_codes() {
    let o = skewlab(&["verify", "characterization", "--seed", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let r = json(&o);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["suite"], "characterization");
    assert_eq!(r["suites"][0]["checks"].as_array().unwrap().len(), 20);

    let r = json(&skewlab(&["verify", "sconcavity-student"]));
    let s1 = &r["suites"][0]["checks"][0];
    assert_eq!(s1["name"], "marginal exponent s1");
    assert!((num(&s1["s1"]) + 0.5).abs() < 1e-12);

    let r = json(&skewlab(&["verify", "counterexample"]));
    assert_eq!(r["pass"], true);
    let q = r["suites"][0]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "quasi-concavity fails")
        .unwrap();
    assert_eq!(q["report"]["pass"], false);
    assert!(q["report"]["witness"]["x"].is_array());
}

#[test]
fn analyze_examples() {
    let o = skewlab(&["analyze", "--base", "normal", "--G0", "normal", "--w", "linear:1"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = json(&o);
    assert_eq!(r["schema_version"], 1);
    assert!((num(&r["normalization"]) - 1.0).abs() < 1e-9);
    let median = r["quantiles"].as_array().unwrap().iter().find(|q| num(&q["p"]) == 0.5).unwrap();
    assert!(num(&median["q"]) > 0.0);
    assert_eq!(r["modes"]["modes"].as_array().unwrap().len(), 1);
    assert_eq!(r["concavity"]["log_concave"]["pass"], true);

    let r = json(&skewlab(&["analyze", "--base", "normal", "--g0", "normal", "--w", "cubic:0,1"]));
    assert_eq!(r["modes"]["modes"].as_array().unwrap().len(), 2);
    assert_eq!(r["concavity"]["quasi_concave"]["pass"], false);

    let r = json(&skewlab(&["analyze", "--base", "cauchy", "--G0", "cauchy", "--w", "poly:x^3-x"]));
    let m1 = &r["moments"][0];
    assert_eq!(m1["order"], 1);
    assert_eq!(m1["error"], "MomentUndefined");
}

#[test]
fn analyze_csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("a.csv");
    let o = skewlab(&["analyze", "--w", "skewt:2,5", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = fs::read_to_string(&path).unwrap();
    assert!(text.starts_with("quantity,value\n"));
    assert!(text.lines().any(|l| l.starts_with("moment_4,")));
}

#[test]
fn quad_tolerance_override_changes_nothing_structural() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_skewlab"))
        .args(["figure", "1", "--out", dir.path().to_str().unwrap()])
        .env("SKEWLAB_QUAD_TOL", "1e-6")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["pass"], true);
}
