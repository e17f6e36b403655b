use std::f64::consts::PI;

use num_complex::Complex64;
use proptest::prelude::*;
use ptmetric::spectrum::{characteristic, general_eigenvalues, has_zero_mode, ModelParams, RootKind};

/// Determinant of the boundary conditions
/// `ψ'(0) + (β + iα)ψ(0) = 0`, `−ψ'(d) + (β − iα)ψ(d) = 0`
/// on `ψ = a·cos(kx) + b·sin(kx)`.
fn boundary_determinant(k: Complex64, alpha: f64, beta: f64, d: f64) -> Complex64 {
    let i = Complex64::new(0.0, 1.0);
    let (left, right) = (beta + i * alpha, beta - i * alpha);
    let (s, c) = ((k * d).sin(), (k * d).cos());
    left * (-k * c + right * s) - k * (k * s + right * c)
}

fn scan_real_roots(params: &ModelParams, k_max: f64) -> Vec<f64> {
    let f = |k: f64| characteristic(Complex64::new(k, 0.0), params).re;
    let step = 1e-3;
    let mut out = Vec::new();
    let mut a = step / 3.0;
    while a < k_max {
        let b = a + step;
        if f(a) * f(b) < 0.0 {
            let (mut lo, mut hi) = (a, b);
            while hi - lo > 1e-15 * hi {
                let mid = 0.5 * (lo + hi);
                if f(lo) * f(mid) <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            out.push(0.5 * (lo + hi));
        }
        a = b;
    }
    out
}

proptest! {
    #[test]
    fn characteristic_is_the_negated_beta_determinant(
        alpha in -2.0f64..2.0, beta in -2.0f64..2.0, d in 0.5f64..4.0,
        re in 0.0f64..6.0, im in -1.0f64..1.0,
    ) {
        let k = Complex64::new(re, im);
        let f = characteristic(k, &ModelParams::new(alpha, beta, d).unwrap());
        let det = boundary_determinant(k, alpha, -beta, d);
        prop_assert!((f + det).norm() < 1e-10 * (1.0 + f.norm()));
    }
}

#[test]
fn real_roots_match_bisection() {
    for (alpha, beta, d) in [(0.0, 1.0, PI), (0.4, 0.7, 2.0), (1.3, 2.5, 1.0)] {
        let params = ModelParams::new(alpha, beta, d).unwrap();
        let k_max = 15.0;
        let spec = general_eigenvalues(&params, k_max, false).unwrap();
        let found: Vec<f64> = spec.roots.iter().filter(|r| r.kind == RootKind::Real).map(|r| r.k.re).collect();
        let oracle = scan_real_roots(&params, k_max);
        assert_eq!(found.len(), oracle.len(), "{params:?}: {found:?} vs {oracle:?}");
        for (a, b) in found.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-10, "{params:?}: {a} vs {b}");
        }
        assert_eq!(spec.audit.missing, 0);
    }
}

#[test]
fn zero_mode_condition() {
    // s·d + 2β = 0 with α = 0: β = −2/d
    let d = 2.0;
    let params = ModelParams::new(0.0, -2.0 / d, d).unwrap();
    assert!(has_zero_mode(&params));
    let spec = general_eigenvalues(&params, 6.0, false).unwrap();
    assert_eq!(spec.roots.iter().filter(|r| r.kind == RootKind::Zero).count(), 1);
    assert!(!has_zero_mode(&ModelParams::new(0.0, 1.0, d).unwrap()));
}

#[test]
fn conjugate_pairs_across_a_parameter_range() {
    for beta in [-0.6, -1.0, -1.5] {
        for alpha in [0.2, 0.5, 1.1] {
            let spec = general_eigenvalues(&ModelParams::new(alpha, beta, PI).unwrap(), 8.0, true).unwrap();
            let complex: Vec<Complex64> =
                spec.roots.iter().filter(|r| r.kind == RootKind::Complex).map(|r| r.k2).collect();
            assert_eq!(complex.len() % 2, 0);
            for z in &complex {
                let gap = complex.iter().map(|w| (w - z.conj()).norm()).fold(f64::INFINITY, f64::min);
                assert!(gap < 1e-9 * (1.0 + z.norm()), "α={alpha} β={beta}: {z}");
            }
            assert!(spec.roots.iter().all(|r| r.resolved));
        }
    }
}

#[test]
fn closed_form_reduction() {
    for alpha in [0.3, 0.5, 0.9, 2.2] {
        let spec = general_eigenvalues(&ModelParams::robin(alpha, PI).unwrap(), 10.5, false).unwrap();
        let mut expect: Vec<f64> = (1..=10).map(|j| (j * j) as f64).collect();
        expect.push(alpha * alpha);
        expect.sort_by(f64::total_cmp);
        let got: Vec<f64> = spec.roots.iter().map(|r| r.k2.re).collect();
        assert_eq!(got.len(), expect.len());
        for (g, e) in got.iter().zip(&expect) {
            assert!((g - e).abs() < 1e-10 * e, "{g} vs {e}");
        }
        assert!(spec.roots.iter().all(|r| r.k2.im.abs() < 1e-12));
    }
}
