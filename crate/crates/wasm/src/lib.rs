//! WebAssembly bindings for the demo page in `www/`.
//!
//! Every export takes plain numbers and returns a JSON string, so the page
//! needs nothing beyond `JSON.parse`.

use std::f64::consts::PI;

use serde::Serialize;
use wasm_bindgen::prelude::*;

use ptmetric::metric::{quadratic_form, theta_apply_closed};
use ptmetric::spectrum::{check_nondegenerate, chi_neumann, closed_form_rows, general_eigenvalues, root_rows};
use ptmetric::verify::cosine_partial_sum;
use ptmetric::{Complex64, Grid, GridFunction, MetricConfig, ModelParams};

fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("plain data serializes")
}

fn error_json(err: impl std::fmt::Display) -> String {
    to_json(&serde_json::json!({ "error": err.to_string() }))
}

#[derive(Debug, Serialize)]
pub struct TrajectoryPoint {
    pub param: f64,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
}

#[derive(Debug, Serialize)]
pub struct Trajectories {
    pub points: Vec<TrajectoryPoint>,
    /// Parameter values where some eigenvalue left the real axis.
    pub complex_at: Vec<f64>,
}

/// Eigenvalues `k²` with `|k| ≤ k_max` along `alpha` (`sweep_beta = false`)
/// or `beta` from `start` to `stop`; the other coupling is held at `fixed`.
pub fn trajectories(
    sweep_beta: bool,
    start: f64,
    stop: f64,
    steps: usize,
    fixed: f64,
    d: f64,
    k_max: f64,
) -> ptmetric::Result<Trajectories> {
    if steps < 2 {
        return Err(ptmetric::Error::InvalidParams(format!("need at least 2 steps, got {steps}")));
    }
    let mut points = Vec::with_capacity(steps);
    let mut complex_at = Vec::new();
    for i in 0..steps {
        let v = start + (stop - start) * i as f64 / (steps - 1) as f64;
        let (alpha, beta) = if sweep_beta { (fixed, v) } else { (v, fixed) };
        let p = ModelParams::new(alpha, beta, d)?;
        let rows = if beta == 0.0 {
            closed_form_rows(&p, (k_max * d / PI).floor() as usize)
        } else {
            root_rows(&general_eigenvalues(&p, k_max, true)?)
        };
        if rows.iter().any(|r| r.im_k2 != 0.0) {
            complex_at.push(v);
        }
        points.push(TrajectoryPoint {
            param: v,
            re: rows.iter().map(|r| r.re_k2).collect(),
            im: rows.iter().map(|r| r.im_k2).collect(),
        });
    }
    Ok(Trajectories { points, complex_at })
}

#[wasm_bindgen(js_name = eigenvalueTrajectories)]
pub fn eigenvalue_trajectories(
    sweep_beta: bool,
    start: f64,
    stop: f64,
    steps: usize,
    fixed: f64,
    d: f64,
    k_max: f64,
) -> String {
    match trajectories(sweep_beta, start, stop, steps, fixed, d, k_max) {
        Ok(t) => to_json(&t),
        Err(e) => error_json(e),
    }
}

#[derive(Debug, Serialize)]
pub struct MetricProfile {
    pub x: Vec<f64>,
    pub input: Vec<f64>,
    pub re: Vec<f64>,
    pub im: Vec<f64>,
    /// `(ψ, Θψ)/‖ψ‖²`.
    pub form_ratio: f64,
    pub degenerate: bool,
}

/// `Θ(α)` applied to `(1 − mix)·χ_j + mix·e^{−iαx}`, with `χ_j` the
/// normalized Neumann mode `j`.
pub fn profile(alpha: f64, d: f64, n: usize, mode: usize, mix: f64) -> ptmetric::Result<MetricProfile> {
    let grid = Grid::new(d, n)?;
    let mut psi = chi_neumann(mode, d).sample(&grid).scale(Complex64::new(1.0 - mix, 0.0));
    // e^{−iαx} spans the kernel when αd/π is a non-zero integer
    let ground = GridFunction::from_fn(&grid, |x| Complex64::new(0.0, -alpha * x).exp());
    psi.axpy(Complex64::new(mix, 0.0), &ground)?;
    let cfg = MetricConfig::new(alpha, d)?;
    let theta = theta_apply_closed(&psi, &cfg)?;
    let norm2 = psi.norm_sqr();
    let form_ratio = if norm2 > 0.0 { quadratic_form(&psi, &cfg)? / norm2 } else { 0.0 };
    Ok(MetricProfile {
        x: grid.nodes().collect(),
        input: psi.values().iter().map(|v| v.re).collect(),
        re: theta.values().iter().map(|v| v.re).collect(),
        im: theta.values().iter().map(|v| v.im).collect(),
        form_ratio,
        degenerate: check_nondegenerate(&ModelParams::robin(alpha, d)?).degenerate,
    })
}

#[wasm_bindgen(js_name = metricProfile)]
pub fn metric_profile(alpha: f64, d: f64, n: usize, mode: usize, mix: f64) -> String {
    match profile(alpha, d, n, mode, mix) {
        Ok(p) => to_json(&p),
        Err(e) => error_json(e),
    }
}

#[derive(Debug, Serialize)]
pub struct PartialSumCurve {
    pub x: Vec<f64>,
    pub sum: Vec<f64>,
    pub limit: Vec<f64>,
    /// Largest error over the interior points `x ∈ [d/10, 9d/10]`.
    pub interior_error: f64,
}

/// The cosine partial sum with `terms` terms, sampled at `samples` points,
/// next to its limit `−x/d`.
pub fn partial_sums(d: f64, terms: usize, samples: usize) -> PartialSumCurve {
    let samples = samples.max(2);
    let x: Vec<f64> = (0..samples).map(|i| d * i as f64 / (samples - 1) as f64).collect();
    let sum: Vec<f64> = x.iter().map(|&x| cosine_partial_sum(x, terms, d)).collect();
    let limit: Vec<f64> = x.iter().map(|&x| -x / d).collect();
    let interior_error = x
        .iter()
        .zip(sum.iter().zip(&limit))
        .filter(|(&x, _)| (0.1 * d..=0.9 * d).contains(&x))
        .map(|(_, (s, l))| (s - l).abs())
        .fold(0.0, f64::max);
    PartialSumCurve { x, sum, limit, interior_error }
}

#[wasm_bindgen(js_name = cosineSum)]
pub fn cosine_sum(d: f64, terms: usize, samples: usize) -> String {
    if !(d.is_finite() && d > 0.0) {
        return error_json(format!("d must be positive, got {d}"));
    }
    to_json(&partial_sums(d, terms, samples))
}
