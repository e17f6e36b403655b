use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use ptmetric::metric::{theta_apply_closed, theta_apply_series};
use ptmetric::{Complex64, Grid, GridFunction, MetricConfig, Quadrature};
use serde_json::Value;

fn ptmetric(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ptmetric")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

/// `(j, re_k2, im_k2, residual)` from the spectrum CSV.
fn csv_rows(text: &str) -> Vec<(usize, f64, f64, f64)> {
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("j,re_k2,im_k2,residual"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap())
        })
        .collect()
}

fn sweep_rows(text: &str) -> Vec<(f64, usize, f64, f64)> {
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("param,j,re_k2,im_k2,residual"));
    lines
        .map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[0].parse().unwrap(), f[1].parse().unwrap(), f[2].parse().unwrap(), f[3].parse().unwrap())
        })
        .collect()
}

fn write_function(dir: &Path, name: &str, f: &GridFunction) -> PathBuf {
    let path = dir.join(name);
    f.write_json(std::fs::File::create(&path).unwrap()).unwrap();
    path
}

fn read_function(path: &Path) -> GridFunction {
    GridFunction::read_json(std::fs::File::open(path).unwrap(), Quadrature::CubicPanel).unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Real roots of `(k² − β²) sin(kd) − 2βk cos(kd)` by sign changes and bisection.
fn bisection_roots(beta: f64, d: f64, k_max: f64) -> Vec<f64> {
    let f = |k: f64| (k * k - beta * beta) * (k * d).sin() - 2.0 * beta * k * (k * d).cos();
    let mut roots = Vec::new();
    let step = 1e-3;
    let mut a = 1e-4;
    while a < k_max {
        let b = a + step;
        if f(a) * f(b) < 0.0 {
            let (mut lo, mut hi) = (a, b);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if f(lo) * f(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            roots.push(0.5 * (lo + hi));
        }
        a = b;
    }
    roots
}

#[test]
fn neumann_spectrum() {
    let out = ptmetric(&["spectrum", "--alpha", "0", "--d", "3.14159265358979", "--jmax", "3"]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 4);
    for (row, expect) in rows.iter().zip([0.0, 1.0, 4.0, 9.0]) {
        assert!((row.1 - expect).abs() < 1e-12, "{row:?}");
        assert_eq!(row.2, 0.0);
    }
}

#[test]
fn robin_ground_state() {
    let out = ptmetric(&["spectrum", "--alpha", "0.5", "--d", "pi", "--jmax", "2"]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows[0].1, 0.25);
    assert_eq!(rows.len(), 3);
}

#[test]
fn two_parameter_spectrum_matches_bisection() {
    let out = ptmetric(&["spectrum", "--alpha", "0", "--beta", "1", "--d", "pi", "--kmax", "6"]);
    assert_eq!(code(&out), 0);
    let rows = csv_rows(&stdout(&out));
    let oracle = bisection_roots(1.0, PI, 6.0);
    assert_eq!(rows.len(), oracle.len());
    for (row, k) in rows.iter().zip(&oracle) {
        assert!((row.1 - k * k).abs() < 1e-10 * k * k, "{row:?} vs {}", k * k);
        assert_eq!(row.2, 0.0);
        assert!(row.3 < 1e-10);
    }
}

#[test]
fn spectrum_json_format() {
    let out = ptmetric(&["spectrum", "--alpha", "0.5", "--jmax", "1", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v[0]["re_k2"], 0.25);
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["verify", "--suite", "nosuchsuite"][..],
        &["spectrum", "--d", "abc"],
        &["spectrum", "--d", "0"],
        &["sweep", "--param", "alpha", "--range", "0:1"],
        &["sweep", "--param", "alpha", "--range", "0:1:1"],
        &["sweep", "--param", "gamma", "--range", "0:1:3"],
        &["nosuchcommand"],
    ] {
        assert_eq!(code(&ptmetric(args)), 2, "{args:?}");
    }
}

#[test]
fn verify_nondegenerate_passes() {
    let out = ptmetric(&["verify", "--alpha", "0.5", "--d", "pi"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    assert!(stdout(&out).contains("0 failed"));
}

#[test]
fn verify_degenerate_flags_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("report.json");
    let out = ptmetric(&["verify", "--alpha", "1", "--d", "pi", "--out", s(&report)]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
    let v: Value = serde_json::from_reader(std::fs::File::open(&report).unwrap()).unwrap();
    let witness = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "kernel_witness[alpha=1]").unwrap();
    assert_eq!(witness["status"], "flagged");
    assert_eq!(v["summary"]["failed"], 0);
}

#[test]
fn verify_fails_with_impossible_tolerance() {
    let out = ptmetric(&["verify", "--alpha", "0.5", "--suite", "metric", "--tol", "1e-30"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("FAIL"));
}

#[test]
fn verify_is_deterministic() {
    let run = || {
        let out = ptmetric(&["verify", "--alpha", "0.3", "--suite", "all", "--seed", "7", "--format", "json"]);
        assert_eq!(code(&out), 0);
        let mut v: Value = serde_json::from_slice(&out.stdout).unwrap();
        v.as_object_mut().unwrap().remove("generated_at").expect("timestamp present");
        serde_json::to_string(&v).unwrap()
    };
    let first = run();
    assert_eq!(first, run());
    assert!(first.contains("\"seed\":7"));
}

#[test]
fn verify_csv_lists_every_check() {
    let out = ptmetric(&["verify", "--alpha", "0.5", "--suite", "forms", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("name,suite,status,residual,tolerance"));
    assert!(lines.all(|l| l.contains(",forms,pass,")));
}

#[test]
fn metric_apply_identity_at_zero_alpha() {
    let dir = tempfile::tempdir().unwrap();
    let grid = Grid::new(PI, 256).unwrap();
    let psi = GridFunction::from_fn(&grid, |x| Complex64::new(x.cos() + x * x, (3.0 * x).sin()));
    let input = write_function(dir.path(), "psi.json", &psi);
    let output = dir.path().join("out.json");
    let out = ptmetric(&["metric", "apply", "--input", s(&input), "--alpha", "0", "--out", s(&output)]);
    assert_eq!(code(&out), 0);
    let theta = read_function(&output);
    assert!(theta.sub(&psi).unwrap().max_abs() < 1e-12);
}

#[test]
fn metric_apply_constant_matches_term_assembly() {
    let dir = tempfile::tempdir().unwrap();
    let (alpha, d) = (0.5, PI);
    let grid = Grid::new(d, 4096).unwrap();
    let one = GridFunction::constant(&grid, Complex64::new(1.0, 0.0));
    let input = write_function(dir.path(), "one.json", &one);
    let output = dir.path().join("out.json");
    let out = ptmetric(&[
        "metric",
        "apply",
        "--input",
        s(&input),
        "--method",
        "closed",
        "--alpha",
        "0.5",
        "--d",
        "pi",
        "--out",
        s(&output),
    ]);
    assert_eq!(code(&out), 0);
    // ψ + φ₀(φ₀, ψ) + Θ₀ψ + iαΘ₁ψ + α²Θ₂ψ with φ₀ = e^{iαx}/√d, Θ₀1 = −1,
    // Θ₁1 = x − d/2 and Θ₂1 = (xd − x²)/2
    let i = Complex64::new(0.0, 1.0);
    let overlap = (1.0 - (-i * alpha * d).exp()) / (i * alpha);
    let expect = GridFunction::from_fn(&grid, |x| {
        (i * alpha * x).exp() * overlap / d + i * alpha * (x - d / 2.0) + alpha * alpha * (x * d - x * x) / 2.0
    });
    let diff = read_function(&output).sub(&expect).unwrap();
    assert!(diff.max_abs() < 1e-12, "{:?}", &diff.values()[..4]);
}

#[test]
fn metric_apply_zero_input() {
    let dir = tempfile::tempdir().unwrap();
    let zero = GridFunction::zeros(&Grid::new(2.0, 64).unwrap());
    let input = write_function(dir.path(), "zero.json", &zero);
    for method in ["closed", "series"] {
        let out = ptmetric(&["metric", "apply", "--input", s(&input), "--alpha", "0.7", "--method", method]);
        assert_eq!(code(&out), 0);
        let theta = GridFunction::read_json(out.stdout.as_slice(), Quadrature::CubicPanel).unwrap();
        assert_eq!(theta.max_abs(), 0.0);
    }
}

#[test]
fn metric_apply_round_trips_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let grid = Grid::new(PI, 300).unwrap();
    let psi = GridFunction::from_fn(&grid, |x| Complex64::new((2.0 * x).cos() / 3.0, x.sin().powi(3)));
    let input = write_function(dir.path(), "psi.json", &psi);
    let output = dir.path().join("out.json");
    let out = ptmetric(&["metric", "apply", "--input", s(&input), "--alpha", "0.3", "--out", s(&output)]);
    assert_eq!(code(&out), 0);
    let expect = theta_apply_closed(&psi, &MetricConfig::new(0.3, PI).unwrap()).unwrap();
    assert_eq!(read_function(&output), expect);

    let out =
        ptmetric(&["metric", "apply", "--input", s(&input), "--alpha", "0.3", "--method", "series", "--jmax", "40"]);
    assert_eq!(code(&out), 0);
    let expect = theta_apply_series(&psi, &MetricConfig::with_cutoff(0.3, PI, 40).unwrap()).unwrap().value;
    let got = GridFunction::read_json(out.stdout.as_slice(), Quadrature::CubicPanel).unwrap();
    assert_eq!(got, expect);
}

#[test]
fn metric_apply_error_codes() {
    let dir = tempfile::tempdir().unwrap();
    let psi = GridFunction::constant(&Grid::new(PI, 64).unwrap(), Complex64::new(1.0, 0.0));
    let input = write_function(dir.path(), "psi.json", &psi);
    let mismatch = ptmetric(&["metric", "apply", "--input", s(&input), "--alpha", "0.5", "--d", "3"]);
    assert_eq!(code(&mismatch), 2);
    let degenerate = ptmetric(&["metric", "apply", "--input", s(&input), "--alpha", "1", "--method", "series"]);
    assert_eq!(code(&degenerate), 3);
    assert!(String::from_utf8_lossy(&degenerate.stderr).contains("degenerate"));
    let closed = ptmetric(&["metric", "apply", "--input", s(&input), "--alpha", "1", "--method", "closed"]);
    assert_eq!(code(&closed), 0);
    let missing = ptmetric(&["metric", "apply", "--input", s(&dir.path().join("nope.json")), "--alpha", "0.5"]);
    assert_eq!(code(&missing), 2);
}

#[test]
fn alpha_sweep_moves_only_the_ground_branch() {
    let out = ptmetric(&["sweep", "--param", "alpha", "--range", "0:0.9:10", "--d", "pi", "--jmax", "5"]);
    assert_eq!(code(&out), 0);
    let rows = sweep_rows(&stdout(&out));
    assert_eq!(rows.len(), 60);
    for (param, j, re, im) in rows {
        let expect = if j == 0 { param * param } else { (j * j) as f64 };
        assert!((re - expect).abs() < 1e-12 && im == 0.0, "{param} {j} {re}");
    }
}

#[test]
fn sweep_crosses_the_collision() {
    let out = ptmetric(&["sweep", "--param", "alpha", "--range", "0.5:1.5:3", "--d", "pi", "--jmax", "2"]);
    assert_eq!(code(&out), 0);
    let rows = sweep_rows(&stdout(&out));
    let at = |p: f64, j: usize| rows.iter().find(|r| r.0 == p && r.1 == j).unwrap().2;
    assert!(at(0.5, 0) < at(0.5, 1));
    assert_eq!(at(1.0, 0), at(1.0, 1));
    assert!(at(1.5, 0) > at(1.5, 1));
}

#[test]
fn beta_sweep_emits_conjugate_pairs() {
    let out =
        ptmetric(&["sweep", "--param", "beta", "--range", "-2:-0.5:4", "--alpha", "0.5", "--d", "pi", "--kmax", "5"]);
    assert_eq!(code(&out), 0);
    let rows = sweep_rows(&stdout(&out));
    let complex: Vec<_> = rows.iter().filter(|r| r.3 != 0.0).collect();
    assert!(!complex.is_empty());
    for a in &complex {
        let partner = complex.iter().any(|b| b.0 == a.0 && (b.2 - a.2).abs() < 1e-9 && (b.3 + a.3).abs() < 1e-9);
        assert!(partner, "{a:?}");
    }
    let params: Vec<f64> = rows.iter().map(|r| r.0).collect();
    assert!(params.windows(2).all(|w| w[0] <= w[1]), "parameter order");
}

#[test]
fn plot_data_is_whitespace_delimited() {
    let out = ptmetric(&["sweep", "--param", "alpha", "--range", "0:1:5", "--jmax", "2", "--plot-data"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(!text.contains(','));
    let data: Vec<&str> = text.lines().filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    assert_eq!(data.len(), 15);
    assert!(data.iter().all(|l| l.split_whitespace().count() == 5));
}
