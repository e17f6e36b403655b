//! Individual identities of the model as numerical measurements.
//!
//! Each function returns the measured quantities; pass/fail decisions and
//! tolerances live in the suite.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::{AnalyticTestFunction, Grid, GridFunction};
use crate::error::{Error, Result};
use crate::metric::{phi0_on, theta_apply_closed, MetricConfig};
use crate::spectrum::{self, chi_dirichlet, chi_neumann, psi_eigenfunction, sinc, spectral_pair};
use crate::I;

/// Relative tolerance on the Robin conditions for membership in `D(H_α)`.
pub const DOMAIN_TOLERANCE: f64 = 1e-10;

/// Largest violation of `ψ'(0) + iαψ(0) = 0`, `ψ'(d) + iαψ(d) = 0`,
/// relative to the size of the boundary data.
pub fn robin_residual(psi: &AnalyticTestFunction, alpha: f64, d: f64) -> f64 {
    let bv = psi.boundary_values(d);
    let left = bv.left_slope + I * alpha * bv.left;
    let right = bv.right_slope + I * alpha * bv.right;
    let scale = 1.0 + bv.left_slope.norm() + bv.right_slope.norm() + alpha.abs() * (bv.left.norm() + bv.right.norm());
    left.norm().max(right.norm()) / scale
}

fn require_domain(psi: &AnalyticTestFunction, alpha: f64, d: f64) -> Result<()> {
    let r = robin_residual(psi, alpha, d);
    if r > DOMAIN_TOLERANCE {
        Err(Error::NotInDomain(r))
    } else {
        Ok(())
    }
}

/// `‖H_{−α}Θψ − ΘH_αψ‖ / ‖ψ‖` for `ψ ∈ D(H_α)`.
///
/// `H_αψ = −ψ''` is exact. The left term uses
/// `−(Θψ)'' = −ψ'' − 2iαψ' + α²ψ + α²φ₀(φ₀, ψ)`, so `Θψ` is never
/// differentiated numerically; only quadrature error remains.
pub fn quasi_hermiticity_residual(psi: &AnalyticTestFunction, cfg: &MetricConfig, grid: &Grid) -> Result<f64> {
    require_domain(psi, cfg.alpha, cfg.d)?;
    let alpha = cfg.alpha;
    let samples = psi.sample(grid);
    let slope = psi.sample_derivative(1, grid);
    let curvature = psi.sample_derivative(2, grid);
    let phi0 = phi0_on(&samples, alpha);
    let projection = phi0.inner_unchecked(&samples);

    let mut lhs = curvature.scale(Complex64::new(-1.0, 0.0));
    lhs.axpy_unchecked(-2.0 * I * alpha, &slope);
    lhs.axpy_unchecked(Complex64::new(alpha * alpha, 0.0), &samples);
    lhs.axpy_unchecked(projection * (alpha * alpha), &phi0);

    let h_psi = curvature.scale(Complex64::new(-1.0, 0.0));
    let rhs = theta_apply_closed(&h_psi, cfg)?;
    let norm = samples.norm();
    if norm == 0.0 {
        return Ok(0.0);
    }
    Ok(lhs.sub(&rhs)?.norm() / norm)
}

/// `Θψ` and `(Θψ)'` at both ends of the interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricBoundary {
    pub left: Complex64,
    pub right: Complex64,
    pub left_slope: Complex64,
    pub right_slope: Complex64,
}

/// Boundary data of `Θψ`, with the derivative taken in closed form:
/// `(Θψ)' = ψ' + iαφ₀(φ₀,ψ) + iα(2ψ − (Jψ)(d)/d) + α²(−Jψ + (J²ψ)(d)/d)`.
pub fn metric_boundary(psi: &AnalyticTestFunction, cfg: &MetricConfig, grid: &Grid) -> Result<MetricBoundary> {
    let (alpha, d) = (cfg.alpha, cfg.d);
    let samples = psi.sample(grid);
    let theta = theta_apply_closed(&samples, cfg)?;
    let phi0 = phi0_on(&samples, alpha);
    let c = phi0.inner_unchecked(&samples);
    let j1 = samples.cumulative_integral();
    let j2 = j1.cumulative_integral();
    let (j1d, j2d) = (j1.last(), j2.last());
    let bv = psi.boundary_values(d);
    let slope = |x: f64, psi_x: Complex64, psi_slope: Complex64, j1x: Complex64| {
        let phi0x = (I * alpha * x).exp() * (1.0 / d).sqrt();
        psi_slope + I * alpha * phi0x * c + I * alpha * (psi_x * 2.0 - j1d / d) + (j2d / d - j1x) * (alpha * alpha)
    };
    Ok(MetricBoundary {
        left: theta.first(),
        right: theta.last(),
        left_slope: slope(0.0, bv.left, bv.left_slope, j1.first()),
        right_slope: slope(d, bv.right, bv.right_slope, j1.last()),
    })
}

/// Violation of the adjoint conditions `(Θψ)' − iαΘψ = 0` at both ends,
/// relative to `1 + max |Θψ|`.
pub fn domain_mapping_residual(psi: &AnalyticTestFunction, cfg: &MetricConfig, grid: &Grid) -> Result<f64> {
    require_domain(psi, cfg.alpha, cfg.d)?;
    let b = metric_boundary(psi, cfg, grid)?;
    let left = b.left_slope - I * cfg.alpha * b.left;
    let right = b.right_slope - I * cfg.alpha * b.right;
    let scale = 1.0 + b.left.norm().max(b.right.norm()) + b.left_slope.norm().max(b.right_slope.norm());
    Ok(left.norm().max(right.norm()) / scale)
}

/// `h_α(φ, ψ) = (φ', ψ') + iα·conj(φ(d))ψ(d) − iα·conj(φ(0))ψ(0)`.
pub fn sesquilinear_form(phi: &AnalyticTestFunction, psi: &AnalyticTestFunction, alpha: f64, grid: &Grid) -> Complex64 {
    let d = grid.d();
    let derivative_term = phi.sample_derivative(1, grid).inner_unchecked(&psi.sample_derivative(1, grid));
    let (pb, qb) = (phi.boundary_values(d), psi.boundary_values(d));
    derivative_term + I * alpha * pb.right.conj() * qb.right - I * alpha * pb.left.conj() * qb.left
}

/// Relative gap `|h_α(φ, ψ) − (φ, −ψ'')|` for `ψ ∈ D(H_α)`.
pub fn form_consistency_residual(
    phi: &AnalyticTestFunction,
    psi: &AnalyticTestFunction,
    alpha: f64,
    grid: &Grid,
) -> Result<f64> {
    require_domain(psi, alpha, grid.d())?;
    let form = sesquilinear_form(phi, psi, alpha, grid);
    let operator = phi.sample(grid).inner_unchecked(&psi.sample_derivative(2, grid).scale(Complex64::new(-1.0, 0.0)));
    Ok((form - operator).norm() / (1.0 + operator.norm()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelativeBound {
    /// `|Im h_α[ψ]| = |α|·||ψ(d)|² − |ψ(0)|²|`.
    pub lhs: f64,
    /// `ε⁻¹α²‖ψ‖² + ε‖ψ'‖²`.
    pub rhs: f64,
    pub slack: f64,
    pub holds: bool,
}

/// `|Im h_α[ψ]| ≤ ε⁻¹α²‖ψ‖² + ε·Re h_α[ψ]`.
pub fn relative_bound_check(
    psi: &AnalyticTestFunction,
    alpha: f64,
    epsilon: f64,
    grid: &Grid,
) -> Result<RelativeBound> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(Error::InvalidParams(format!("epsilon must be positive, got {epsilon}")));
    }
    let bv = psi.boundary_values(grid.d());
    let lhs = (alpha * (bv.right.norm_sqr() - bv.left.norm_sqr())).abs();
    let re_form = psi.sample_derivative(1, grid).norm_sqr();
    let rhs = alpha * alpha * psi.sample(grid).norm_sqr() / epsilon + epsilon * re_form;
    Ok(RelativeBound { lhs, rhs, slack: rhs - lhs, holds: lhs <= rhs })
}

/// Matrix of `(φ_j, ψ_k)`, `j, k ≤ j_max`.
#[derive(Debug, Clone, PartialEq)]
pub struct Biorthonormality {
    pub entries: Vec<Vec<Complex64>>,
    /// `max |(φ_j, ψ_k) − δ_jk|`.
    pub max_deviation: f64,
    /// Position of the largest deviation.
    pub worst: (usize, usize),
}

pub fn biorthonormality_matrix(cfg: &MetricConfig, j_max: usize, grid: &Grid) -> Result<Biorthonormality> {
    let params = cfg.params();
    let psis: Vec<GridFunction> =
        (0..=j_max).map(|k| psi_eigenfunction(k, &params).map(|f| f.sample(grid))).collect::<Result<_>>()?;
    let phis: Vec<GridFunction> =
        (0..=j_max).map(|j| spectrum::phi_unchecked(j, cfg.alpha, cfg.d).sample(grid)).collect();
    let mut max_deviation = 0.0;
    let mut worst = (0, 0);
    let entries = phis
        .iter()
        .enumerate()
        .map(|(j, phi)| {
            psis.iter()
                .enumerate()
                .map(|(k, psi)| {
                    let v = phi.inner_unchecked(psi);
                    let dev = (v - if j == k { 1.0 } else { 0.0 }).norm();
                    if dev > max_deviation {
                        max_deviation = dev;
                        worst = (j, k);
                    }
                    v
                })
                .collect()
        })
        .collect();
    Ok(Biorthonormality { entries, max_deviation, worst })
}

/// Running sums `Σ_{j≤m} |(χ_j^N, ψ)|²` and `Σ_{1≤j≤m} |(χ_j^D, ψ)|²` for
/// `m = 0..=j_max` (the Dirichlet sum is zero at `m = 0`).
pub fn parseval_partial_sums(psi: &GridFunction, j_max: usize) -> (Vec<f64>, Vec<f64>) {
    let (grid, d) = (psi.grid(), psi.grid().d());
    let mut neumann = Vec::with_capacity(j_max + 1);
    let mut dirichlet = Vec::with_capacity(j_max + 1);
    let (mut sn, mut sd) = (0.0, 0.0);
    for j in 0..=j_max {
        sn += chi_neumann(j, d).sample(grid).inner_unchecked(psi).norm_sqr();
        if j >= 1 {
            sd += chi_dirichlet(j, d).expect("j >= 1").sample(grid).inner_unchecked(psi).norm_sqr();
        }
        neumann.push(sn);
        dirichlet.push(sd);
    }
    (neumann, dirichlet)
}

/// Final Neumann and Dirichlet partial sums of the Parseval series.
pub fn parseval_check(psi: &GridFunction, j_max: usize) -> (f64, f64) {
    let (n, d) = parseval_partial_sums(psi, j_max);
    (n[j_max], d[j_max])
}

/// `S_J(x) = Σ_{j=1}^{J} χ_j^D(x)χ_j^N(d)/k_j`, which tends to `−x/d` on
/// `[0, d)`.
pub fn cosine_partial_sum(x: f64, terms: usize, d: f64) -> f64 {
    let scale = 2.0 / d;
    (1..=terms)
        .map(|j| {
            let k = j as f64 * std::f64::consts::PI / d;
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            scale * (k * x).sin() * sign / k
        })
        .sum()
}

/// Which biorthonormal expansion to reconstruct.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    /// `ψ = Σ ψ_j(φ_j, ψ)`.
    PsiBasis,
    /// `ψ = Σ φ_j(ψ_j, ψ)`.
    PhiBasis,
}

/// Coefficients `c_0..=c_{J_max}` of a biorthonormal expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionCoefficients(Vec<Complex64>);

impl ExpansionCoefficients {
    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    /// `J_max + 1`.
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub residual: f64,
    pub coefficients: ExpansionCoefficients,
}

/// `‖ψ − Σ_{j≤J_max} ψ_j(φ_j, ψ)‖` (or the mirrored `φ`-expansion).
pub fn expansion_residual(psi: &GridFunction, cfg: &MetricConfig, j_max: usize, basis: Basis) -> Result<Expansion> {
    let params = cfg.params();
    let grid = psi.grid();
    let mut approx = GridFunction::zeros(grid);
    let mut coefficients = Vec::with_capacity(j_max + 1);
    for j in 0..=j_max {
        let eig = psi_eigenfunction(j, &params)?.sample(grid);
        let adj = spectrum::phi_unchecked(j, cfg.alpha, cfg.d).sample(grid);
        let (test, build) = match basis {
            Basis::PsiBasis => (adj, eig),
            Basis::PhiBasis => (eig, adj),
        };
        let c = test.inner_unchecked(psi);
        approx.axpy_unchecked(c, &build);
        coefficients.push(c);
    }
    Ok(Expansion { residual: psi.sub(&approx)?.norm(), coefficients: ExpansionCoefficients(coefficients) })
}

/// `α²(k_j² + α²)/(k_j² − α²)²`, the exact `‖ψ_j − χ_j^N‖²`.
pub fn norm_difference_formula(j: usize, alpha: f64, d: f64) -> f64 {
    let k = j as f64 * std::f64::consts::PI / d;
    let (k2, a2) = (k * k, alpha * alpha);
    a2 * (k2 + a2) / ((k2 - a2) * (k2 - a2))
}

/// Measured `‖ψ_j − χ_j^N‖²` and its closed form, `j ≥ 1`.
pub fn norm_difference_check(j: usize, cfg: &MetricConfig, grid: &Grid) -> Result<(f64, f64)> {
    if j == 0 {
        return Err(Error::InvalidIndex(0));
    }
    let psi = psi_eigenfunction(j, &cfg.params())?;
    let diff = psi.plus(&chi_neumann(j, cfg.d).scale(Complex64::new(-1.0, 0.0)));
    Ok((diff.sample(grid).norm_sqr(), norm_difference_formula(j, cfg.alpha, cfg.d)))
}

/// Measured `|(φ₀, ψ)|/‖ψ‖` for `ψ ∝ e^{−iαx}` and the closed form
/// `|sin(αd)/(αd)|`. Valid at degenerate `α` too, where both vanish.
pub fn phi0_projection_identity(cfg: &MetricConfig, grid: &Grid) -> (f64, f64) {
    let psi = GridFunction::from_fn(grid, |x| (-I * cfg.alpha * x).exp());
    let phi0 = phi0_on(&psi, cfg.alpha);
    let measured = phi0.inner_unchecked(&psi).norm() / psi.norm();
    (measured, sinc(cfg.alpha * cfg.d).abs())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaugeResiduals {
    /// `|φ'(0)| + |φ'(d)|` for `φ = φ₀ψ_j`.
    pub boundary: f64,
    /// `‖−φ'' + 2iαφ' + α²φ − k²φ‖`.
    pub equation: f64,
    /// `|Im k²|·‖φ'‖²`.
    pub reality: f64,
}

/// The transformed eigenfunction `φ = φ₀ψ_j` solves a Neumann problem.
pub fn gauge_transform_residual(j: usize, cfg: &MetricConfig, grid: &Grid) -> Result<GaugeResiduals> {
    let params = cfg.params();
    let pair = spectral_pair(j, &params)?;
    let alpha = cfg.alpha;
    let phi = psi_eigenfunction(j, &params)?.modulate(I * alpha)?.scale(Complex64::new((1.0 / cfg.d).sqrt(), 0.0));
    let boundary = phi.derivative(1, 0.0).norm() + phi.derivative(1, cfg.d).norm();
    let k2 = pair.eigenvalue;
    let equation = GridFunction::from_fn(grid, |x| {
        -phi.derivative(2, x) + 2.0 * I * alpha * phi.derivative(1, x) + (alpha * alpha - k2) * phi.eval(x)
    })
    .norm();
    let reality = k2.im.abs() * phi.sample_derivative(1, grid).norm_sqr();
    Ok(GaugeResiduals { boundary, equation, reality })
}
