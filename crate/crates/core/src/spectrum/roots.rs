//! Eigenvalues of the two-parameter model from its characteristic function
//!
//! ```text
//! F(k) = [k² − (α² + β²)]·sin(kd) − 2βk·cos(kd),    E = k².
//! ```
//!
//! `F` is odd and real on the real axis, so roots come as `±k` and `k, k̄`;
//! each eigenvalue is represented by one root with `Re k > 0`, or `k = iκ`
//! (`κ > 0`) for a negative eigenvalue. `k = 0` is always a root of `F`; it
//! is an eigenvalue only when the root is triple, i.e. when
//! `(α² + β²)d + 2β = 0`.
//!
//! With this sign convention `β` enters with the opposite sign to the
//! boundary conditions stored in [`ModelParams`]: `F` is the characteristic
//! function of `ψ'(0) + (iα − β)ψ(0) = 0`, `−ψ'(d) − (β + iα)ψ(d) = 0`.
//! For `β = 0` the two coincide and `F = (k² − α²)sin(kd)`.
//!
//! The search runs in three stages:
//!
//! 1. real roots: sign changes of `F(k)/k` on a mesh of step `π/(8d)`,
//!    refined by safeguarded Newton–bisection;
//! 2. the imaginary axis, the same way on `κ ↦ F(iκ)/i`;
//! 3. when the count audit reports missing roots (or on request), complex
//!    Newton with deflation by every root already known, seeded first at the
//!    near-misses of `|F|` on the real axis (where two real roots have
//!    collided) and then on a lattice over the quarter disc.
//!
//! The count audit uses the argument principle on `|k| = (N + ½)π/d`, the
//! smallest such radius at or above `k_max`. On that circle `sin(kd)` stays
//! away from zero, and asymptotically the circle holds `N + 1` eigenvalues.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::ModelParams;
use crate::error::{Error, Result};

/// Maximum Newton iterations per seed.
pub const MAX_NEWTON_ITERATIONS: usize = 100;

/// Residual target `|F(k)| < POLISH_TOLERANCE·(1 + |k|²)` (scaled by
/// `cosh(d·Im k)` off the real axis).
pub const POLISH_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RootKind {
    /// `k = 0` with `E = 0`.
    Zero,
    /// `k > 0`, `E > 0`.
    Real,
    /// `k = iκ`, `E < 0`.
    Imaginary,
    /// Non-real `k` off the imaginary axis; `E` non-real. Reported together
    /// with its conjugate partner.
    Complex,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralRoot {
    pub k: Complex64,
    /// The eigenvalue `k²`.
    pub k2: Complex64,
    /// `|F(k)|`.
    pub residual: f64,
    pub kind: RootKind,
    /// `false` when Newton did not converge; `k` is then the last iterate.
    pub resolved: bool,
}

/// Comparison of the roots found against the number that must exist.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CountAudit {
    /// Radius `(N + ½)π/d` of the counting circle.
    pub radius: f64,
    /// Asymptotic count `N + 1`.
    pub asymptotic: usize,
    /// Count from the winding number of `F` on the circle.
    pub expected: usize,
    /// Roots found inside the circle (each complex pair counts twice).
    pub found: usize,
    pub missing: usize,
    /// Whether the complex Newton stage ran.
    pub complex_search: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneralSpectrum {
    pub params: ModelParams,
    pub k_max: f64,
    /// Sorted by `(Re k², Im k²)`; only roots with `|k| ≤ k_max`.
    pub roots: Vec<SpectralRoot>,
    /// Unresolved iterates standing in for roots the audit says exist.
    pub unresolved: Vec<SpectralRoot>,
    pub audit: CountAudit,
}

impl GeneralSpectrum {
    /// Resolved and unresolved entries, sorted by eigenvalue.
    pub fn all(&self) -> Vec<SpectralRoot> {
        let mut all: Vec<SpectralRoot> = self.roots.iter().chain(&self.unresolved).copied().collect();
        sort_roots(&mut all);
        all
    }

    pub fn eigenvalues(&self) -> Vec<Complex64> {
        self.roots.iter().map(|r| r.k2).collect()
    }
}

/// `F(k)`.
pub fn characteristic(k: Complex64, params: &ModelParams) -> Complex64 {
    let ModelParams { alpha, beta, d } = *params;
    let s = alpha * alpha + beta * beta;
    let kd = k * d;
    (k * k - s) * kd.sin() - k * (2.0 * beta) * kd.cos()
}

/// `F'(k)`.
pub fn characteristic_derivative(k: Complex64, params: &ModelParams) -> Complex64 {
    let ModelParams { alpha, beta, d } = *params;
    let s = alpha * alpha + beta * beta;
    let kd = k * d;
    let (sin, cos) = (kd.sin(), kd.cos());
    k * 2.0 * sin + (k * k - s) * d * cos - 2.0 * beta * cos + k * (2.0 * beta * d) * sin
}

fn characteristic_second_derivative(k: f64, params: &ModelParams) -> f64 {
    let ModelParams { alpha, beta, d } = *params;
    let s = alpha * alpha + beta * beta;
    let (sin, cos) = ((k * d).sin(), (k * d).cos());
    (2.0 - (k * k - s) * d * d + 4.0 * beta * d) * sin + (4.0 * k * d + 2.0 * beta * d * d * k) * cos
}

/// `|F(k)|`, the root-quality metric. For `β = 0` this is `|(k² − α²)sin(kd)|`.
pub fn eigen_residual(k: Complex64, params: &ModelParams) -> f64 {
    characteristic(k, params).norm()
}

fn tolerance(k: Complex64, d: f64) -> f64 {
    POLISH_TOLERANCE * (1.0 + k.norm_sqr()) * (k.im * d).cosh()
}

/// Whether `E = 0` is an eigenvalue (triple root of `F` at the origin).
pub fn has_zero_mode(params: &ModelParams) -> bool {
    let ModelParams { alpha, beta, d } = *params;
    let s = alpha * alpha + beta * beta;
    (s * d + 2.0 * beta).abs() <= 1e-12 * (1.0 + s * d + 2.0 * beta.abs())
}

/// All eigenvalues with `|k| ≤ k_max`: real roots always, complex and
/// negative ones when found. Complex roots are never claimed complete; see
/// [`CountAudit`].
pub fn general_eigenvalues(params: &ModelParams, k_max: f64, expect_complex: bool) -> Result<GeneralSpectrum> {
    if !(k_max.is_finite() && k_max > 0.0) {
        return Err(Error::InvalidParams(format!("k_max must be positive, got {k_max}")));
    }
    let d = params.d;
    let n_half = ((k_max * d / PI) - 0.5).ceil().max(0.0) as usize;
    let radius = (n_half as f64 + 0.5) * PI / d;
    let zero_mode = has_zero_mode(params);
    let origin_multiplicity = if zero_mode { 3 } else { 1 };

    let winding = winding_number(params, radius);
    let expected = winding.saturating_sub(origin_multiplicity) / 2 + usize::from(zero_mode);

    let mut search = Search::new(*params, radius);
    if zero_mode {
        search.push(SpectralRoot {
            k: Complex64::new(0.0, 0.0),
            k2: Complex64::new(0.0, 0.0),
            residual: 0.0,
            kind: RootKind::Zero,
            resolved: true,
        });
    }
    let near_misses = search.real_axis();
    search.imaginary_axis();

    let run_complex = expect_complex || search.count() < expected;
    if run_complex {
        search.complex_plane(&near_misses, expected);
    }

    let found = search.count();
    let missing = expected.saturating_sub(found);
    let unresolved = search.unresolved(missing);

    let mut roots: Vec<SpectralRoot> =
        search.roots.into_iter().filter(|r| r.k.norm() <= k_max * (1.0 + 1e-12)).collect();
    sort_roots(&mut roots);

    Ok(GeneralSpectrum {
        params: *params,
        k_max,
        roots,
        unresolved,
        audit: CountAudit { radius, asymptotic: n_half + 1, expected, found, missing, complex_search: run_complex },
    })
}

fn sort_roots(roots: &mut [SpectralRoot]) {
    roots.sort_by(|a, b| a.k2.re.total_cmp(&b.k2.re).then(a.k2.im.total_cmp(&b.k2.im)));
}

/// Winding number of `F` around `|k| = radius`, with adaptive refinement so
/// that no step turns the phase by more than a quarter turn.
fn winding_number(params: &ModelParams, radius: f64) -> usize {
    let segments = 2048.max(64 * (radius * params.d).ceil() as usize);
    let at = |t: f64| characteristic(Complex64::from_polar(radius, t), params);
    let mut total = 0.0;
    let step = 2.0 * PI / segments as f64;
    let mut prev_t = 0.0;
    let mut prev = at(0.0);
    for i in 1..=segments {
        let t = if i == segments { 2.0 * PI } else { i as f64 * step };
        let cur = at(t);
        total += phase_change(&at, prev_t, prev, t, cur, 0);
        prev_t = t;
        prev = cur;
    }
    (total / (2.0 * PI)).round().max(0.0) as usize
}

fn phase_change(at: &impl Fn(f64) -> Complex64, t0: f64, f0: Complex64, t1: f64, f1: Complex64, depth: u32) -> f64 {
    let delta = (f1 / f0).arg();
    if delta.abs() < PI / 4.0 || depth > 30 {
        return delta;
    }
    let tm = 0.5 * (t0 + t1);
    let fm = at(tm);
    phase_change(at, t0, f0, tm, fm, depth + 1) + phase_change(at, tm, fm, t1, f1, depth + 1)
}

struct Search {
    params: ModelParams,
    radius: f64,
    roots: Vec<SpectralRoot>,
    failures: Vec<SpectralRoot>,
}

impl Search {
    fn new(params: ModelParams, radius: f64) -> Self {
        Search { params, radius, roots: Vec::new(), failures: Vec::new() }
    }

    fn count(&self) -> usize {
        self.roots.len()
    }

    fn push(&mut self, root: SpectralRoot) {
        self.roots.push(root);
    }

    fn make_root(&self, k: Complex64, kind: RootKind) -> SpectralRoot {
        let residual = eigen_residual(k, &self.params);
        SpectralRoot { k, k2: k * k, residual, kind, resolved: residual < tolerance(k, self.params.d) }
    }

    fn mesh_step(&self) -> f64 {
        PI / (8.0 * self.params.d)
    }

    /// Sign changes of `F(k)/k` on `(0, radius]`. Returns the locations of
    /// local minima of `|F(k)/k|` without a sign change (near-collisions).
    fn real_axis(&mut self) -> Vec<f64> {
        let p = self.params;
        let g = |k: f64| characteristic(Complex64::new(k, 0.0), &p).re / k;
        let found = bracket_and_polish(g, |k| self.real_polish(k), self.mesh_step(), self.radius);
        for (k, _) in &found.roots {
            let root = self.make_root(Complex64::new(*k, 0.0), RootKind::Real);
            self.push(root);
        }
        found.near_misses
    }

    fn real_polish(&self, k: f64) -> f64 {
        // one Newton step on F itself, kept only if it reduces the residual
        let p = &self.params;
        let kc = Complex64::new(k, 0.0);
        let f = characteristic(kc, p).re;
        let df = characteristic_derivative(kc, p).re;
        if df != 0.0 {
            let next = k - f / df;
            if (next - k).abs() < 1e-8 * (1.0 + k) && characteristic(Complex64::new(next, 0.0), p).re.abs() < f.abs() {
                return next;
            }
        }
        k
    }

    /// Roots `k = iκ` with `κ ∈ (0, radius]`.
    fn imaginary_axis(&mut self) {
        let p = self.params;
        let g = |kappa: f64| characteristic(Complex64::new(0.0, kappa), &p).im / kappa;
        let found = bracket_and_polish(g, |k| k, self.mesh_step(), self.radius);
        for (kappa, _) in &found.roots {
            let root = self.make_root(Complex64::new(0.0, *kappa), RootKind::Imaginary);
            self.push(root);
        }
    }

    /// Every root `r` known so far together with its images `−r`, `r̄`, `−r̄`.
    fn deflation_set(&self) -> Vec<Complex64> {
        let mut set = Vec::with_capacity(4 * self.roots.len() + 1);
        set.push(Complex64::new(0.0, 0.0));
        for r in &self.roots {
            if r.kind == RootKind::Zero {
                // already counted once above; a triple root needs two more
                set.push(Complex64::new(0.0, 0.0));
                set.push(Complex64::new(0.0, 0.0));
                continue;
            }
            set.push(r.k);
            set.push(-r.k);
            if r.kind == RootKind::Complex {
                set.push(r.k.conj());
                set.push(-r.k.conj());
            }
        }
        set
    }

    fn complex_plane(&mut self, near_misses: &[f64], expected: usize) {
        let d = self.params.d;
        let unit = PI / d;
        let mut seeds: Vec<Complex64> = Vec::new();
        for &k in near_misses {
            for im in [0.05, 0.3, 1.0] {
                seeds.push(Complex64::new(k, im * unit));
            }
        }
        let re_steps = (2.0 * self.radius / unit).ceil() as usize;
        for im in [0.25, 0.5, 1.0, 2.0, 4.0] {
            for i in 0..=re_steps {
                let z = Complex64::new(i as f64 * 0.5 * unit, im * unit);
                if z.norm() < self.radius {
                    seeds.push(z);
                }
            }
        }

        for seed in seeds {
            if self.count() >= expected {
                break;
            }
            let known = self.deflation_set();
            match deflated_newton(seed, &self.params, &known) {
                Ok(k) => self.accept(k),
                Err(last) => {
                    let r = self.make_root(last, RootKind::Complex);
                    self.failures.push(SpectralRoot { resolved: false, ..r });
                }
            }
        }
    }

    fn accept(&mut self, k: Complex64) {
        let scale = 1.0 + k.norm();
        // fold into the representative quadrant
        let mut k = if k.re < 0.0 { -k } else { k };
        if k.im < 0.0 {
            k = k.conj();
        }
        if k.norm() >= self.radius || k.norm() < 1e-10 {
            return;
        }
        if k.im.abs() < 1e-6 * scale {
            if let Some(x) = self.double_real_root(k.re) {
                // a double root (degenerate α) is listed twice
                let copies =
                    self.roots.iter().filter(|r| r.kind == RootKind::Real && (r.k.re - x).abs() < 1e-6 * scale).count();
                if copies < 2 {
                    let root = self.make_root(Complex64::new(x, 0.0), RootKind::Real);
                    self.push(root);
                }
                return;
            }
        }
        if self.roots.iter().any(|r| (r.k - k).norm() < 1e-8 * scale) {
            return;
        }
        if k.im.abs() < 1e-10 * scale {
            let root = self.make_root(Complex64::new(k.re, 0.0), RootKind::Real);
            self.push(root);
        } else if k.re.abs() < 1e-10 * scale {
            let root = self.make_root(Complex64::new(0.0, k.im), RootKind::Imaginary);
            self.push(root);
        } else {
            let upper = self.make_root(k, RootKind::Complex);
            // the partner is polished on its own, without deflation
            let partner = match deflated_newton(k.conj(), &self.params, &[]) {
                Ok(z) => self.make_root(z, RootKind::Complex),
                Err(z) => SpectralRoot { resolved: false, ..self.make_root(z, RootKind::Complex) },
            };
            self.push(upper);
            self.push(partner);
        }
    }

    /// Newton on `F'` from `x0`; returns the limit if it is also a root of
    /// `F`, i.e. a multiple real root.
    fn double_real_root(&self, x0: f64) -> Option<f64> {
        let p = &self.params;
        let mut x = x0;
        for _ in 0..20 {
            let slope = characteristic_derivative(Complex64::new(x, 0.0), p).re;
            let curvature = characteristic_second_derivative(x, p);
            if curvature == 0.0 {
                return None;
            }
            let step = slope / curvature;
            x -= step;
            if step.abs() < 1e-15 * (1.0 + x.abs()) {
                break;
            }
        }
        let root = self.make_root(Complex64::new(x, 0.0), RootKind::Real);
        ((x - x0).abs() < 1e-4 * (1.0 + x0.abs()) && root.resolved).then_some(x)
    }

    fn unresolved(&self, missing: usize) -> Vec<SpectralRoot> {
        let mut candidates: Vec<SpectralRoot> =
            self.failures.iter().filter(|r| r.k.norm() < self.radius).copied().collect();
        candidates.sort_by(|a, b| a.residual.total_cmp(&b.residual));
        let mut picked: Vec<SpectralRoot> = Vec::new();
        for c in candidates {
            if picked.len() >= missing {
                break;
            }
            if picked.iter().all(|p| (p.k - c.k).norm() > 1e-3 * (1.0 + c.k.norm())) {
                picked.push(c);
            }
        }
        picked
    }
}

struct Bracketed {
    roots: Vec<(f64, f64)>,
    near_misses: Vec<f64>,
}

/// Scan `g` on `(0, upper]` with the given step, refine every sign change by
/// bisection, and record local minima of `|g|` that do not cross zero.
fn bracket_and_polish(g: impl Fn(f64) -> f64, polish: impl Fn(f64) -> f64, step: f64, upper: f64) -> Bracketed {
    let cells = (upper / step).ceil() as usize;
    let node = |i: usize| if i == 0 { 1e-3 * step } else { (i as f64 * step).min(upper) };
    let values: Vec<f64> = (0..=cells).map(|i| g(node(i))).collect();
    let mut roots = Vec::new();
    let mut near_misses = Vec::new();
    for i in 0..cells {
        let (a, b) = (node(i), node(i + 1));
        let (fa, fb) = (values[i], values[i + 1]);
        if fa == 0.0 {
            if i > 0 {
                roots.push((a, 0.0));
            }
            continue;
        }
        if fa.signum() != fb.signum() && fb != 0.0 {
            let root = polish(bisect(&g, a, b, fa));
            roots.push((root, g(root)));
        } else if i > 0 && values[i - 1].signum() == fa.signum() && fa.signum() == fb.signum() {
            let (prev, cur, next) = (values[i - 1].abs(), fa.abs(), fb.abs());
            if cur < prev && cur < next {
                near_misses.push(a);
            }
        }
    }
    if values[cells] == 0.0 {
        roots.push((node(cells), 0.0));
    }
    Bracketed { roots, near_misses }
}

fn bisect(g: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, mut fa: f64) -> f64 {
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        if m <= a || m >= b {
            break;
        }
        let fm = g(m);
        if fm == 0.0 {
            return m;
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

/// Newton on `F(k)/∏(k − r)`. `Err` carries the last iterate.
fn deflated_newton(seed: Complex64, params: &ModelParams, known: &[Complex64]) -> Result<Complex64, Complex64> {
    let mut k = seed;
    for _ in 0..MAX_NEWTON_ITERATIONS {
        let f = characteristic(k, params);
        if f.norm() < tolerance(k, params.d) * 1e-2 {
            return Ok(k);
        }
        let df = characteristic_derivative(k, params);
        let mut log_derivative = df / f;
        for &r in known {
            log_derivative -= (k - r).inv();
        }
        let delta = log_derivative.inv();
        if !(delta.re.is_finite() && delta.im.is_finite()) {
            return Err(k);
        }
        // cap wild steps
        let cap = PI / params.d;
        let delta = if delta.norm() > cap { delta * (cap / delta.norm()) } else { delta };
        k -= delta;
        if delta.norm() < 1e-15 * (1.0 + k.norm()) {
            return if eigen_residual(k, params) < tolerance(k, params.d) { Ok(k) } else { Err(k) };
        }
    }
    if eigen_residual(k, params) < tolerance(k, params.d) {
        Ok(k)
    } else {
        Err(k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(alpha: f64, beta: f64, d: f64) -> ModelParams {
        ModelParams::new(alpha, beta, d).unwrap()
    }

    #[test]
    fn residual_examples() {
        let p = params(0.7, 0.0, 2.0);
        for j in 1..5 {
            let k = Complex64::new(p.wavenumber(j), 0.0);
            assert!(eigen_residual(k, &p) < 1e-14 * (1.0 + k.norm_sqr()));
        }
        assert!(eigen_residual(Complex64::new(0.7, 0.0), &p) < 1e-15);
        let q = params(0.0, 0.0, PI);
        let r = eigen_residual(Complex64::new(0.9, 0.0), &q);
        assert!((r - 0.81 * (0.9 * PI).sin()).abs() < 1e-15);
        assert!((r - 0.2503).abs() < 1e-4);
    }

    #[test]
    fn derivative_matches_difference_quotient() {
        let p = params(0.4, -1.3, 2.2);
        for k in [Complex64::new(0.3, 0.0), Complex64::new(2.0, 0.7), Complex64::new(5.1, -0.2)] {
            let h = 1e-6;
            let fd = (characteristic(k + h, &p) - characteristic(k - h, &p)) / (2.0 * h);
            assert!((fd - characteristic_derivative(k, &p)).norm() < 1e-6 * (1.0 + fd.norm()));
        }
    }

    #[test]
    fn half_alpha_robin_spectrum() {
        let spec = general_eigenvalues(&params(0.5, 0.0, PI), 5.5, false).unwrap();
        let ks: Vec<f64> = spec.roots.iter().map(|r| r.k.re).collect();
        let expect = [0.5, 1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(ks.len(), expect.len(), "{ks:?}");
        for (k, e) in ks.iter().zip(expect) {
            assert!((k - e).abs() < 1e-12, "{k} vs {e}");
        }
        assert!(spec.roots.iter().all(|r| r.resolved && r.kind == RootKind::Real));
        assert_eq!(spec.audit.missing, 0);
        assert_eq!(spec.audit.expected, spec.audit.found);
    }

    #[test]
    fn neumann_spectrum_includes_zero_mode() {
        let spec = general_eigenvalues(&params(0.0, 0.0, 2.0), 8.0, false).unwrap();
        assert_eq!(spec.roots[0].kind, RootKind::Zero);
        for (j, r) in spec.roots.iter().enumerate() {
            assert!((r.k.re - j as f64 * PI / 2.0).abs() < 1e-12);
        }
        assert_eq!(spec.roots.len(), 6);
    }

    #[test]
    fn degenerate_double_root_is_listed_twice() {
        let spec = general_eigenvalues(&params(1.0, 0.0, PI), 4.5, false).unwrap();
        let near_one: Vec<_> = spec.roots.iter().filter(|r| (r.k2 - 1.0).norm() < 1e-3).collect();
        assert_eq!(near_one.len(), 2, "{spec:?}");
        for r in near_one {
            assert_eq!(r.kind, RootKind::Real);
            assert!((r.k.re - 1.0).abs() < 1e-12);
        }
        assert_eq!(spec.audit.missing, 0);
        assert_eq!(spec.roots.len(), 5);
    }

    #[test]
    fn second_derivative_matches_difference_quotient() {
        let p = params(0.4, -0.8, 2.3);
        for k in [0.3, 1.7, 4.2] {
            let h = 1e-5;
            let fd = (characteristic_derivative(Complex64::new(k + h, 0.0), &p).re
                - characteristic_derivative(Complex64::new(k - h, 0.0), &p).re)
                / (2.0 * h);
            assert!((characteristic_second_derivative(k, &p) - fd).abs() < 1e-6 * (1.0 + fd.abs()));
        }
    }

    #[test]
    fn negative_eigenvalue_on_imaginary_axis() {
        // tanh(πκ)(κ² + 1) = 2κ has two positive roots
        let spec = general_eigenvalues(&params(0.0, -1.0, PI), 6.0, false).unwrap();
        let neg: Vec<_> = spec.roots.iter().filter(|r| r.kind == RootKind::Imaginary).collect();
        assert_eq!(neg.len(), 2);
        let expect = [-1.071_506_866_267_980_4f64.powi(2), -0.882_251_819_485_255_2f64.powi(2)];
        for (r, e) in neg.iter().zip(expect) {
            assert!(r.resolved && (r.k2.re - e).abs() < 1e-10, "{r:?}");
        }
        assert_eq!(spec.audit.missing, 0);
    }

    #[test]
    fn complex_pair_is_recovered_with_conjugate() {
        let spec = general_eigenvalues(&params(0.5, -1.0, PI), 6.0, false).unwrap();
        let complex: Vec<_> = spec.roots.iter().filter(|r| r.kind == RootKind::Complex).collect();
        assert_eq!(complex.len(), 2, "{:?}", spec);
        assert!(spec.audit.complex_search);
        assert_eq!(spec.audit.missing, 0);
        let (a, b) = (complex[0].k2, complex[1].k2);
        assert!((a - b.conj()).norm() < 1e-9);
        assert!(a.im.abs() > 0.1);
        assert!(complex.iter().all(|r| r.resolved));
    }

    #[test]
    fn rejects_bad_k_max() {
        assert!(general_eigenvalues(&params(0.5, 0.0, PI), 0.0, false).is_err());
        assert!(general_eigenvalues(&params(0.5, 0.0, PI), f64::NAN, false).is_err());
    }

    #[test]
    fn forced_complex_search_finds_nothing_spurious() {
        let spec = general_eigenvalues(&params(0.3, 0.0, PI), 7.5, true).unwrap();
        assert!(spec.roots.iter().all(|r| r.kind != RootKind::Complex));
        assert_eq!(spec.roots.len(), 8);
        assert!(spec.unresolved.is_empty());
    }
}
