//! The metric operator
//!
//! ```text
//! Θ(α) = I + φ₀(φ₀, ·) + Θ₀ + iαΘ₁ + α²Θ₂
//! (Θ₀ψ)(x) = −(1/d)(Jψ)(d)
//! (Θ₁ψ)(x) = 2(Jψ)(x) − (x/d)(Jψ)(d) − (1/d)(J²ψ)(d)
//! (Θ₂ψ)(x) = −(J²ψ)(x) + (x/d)(J²ψ)(d)
//! ```
//!
//! with `φ₀ = √(1/d)e^{iαx}` and `J` the cumulative integral. It coincides
//! with the eigen-series `Σ φ_j(φ_j, ·)` and satisfies `H_α*Θ = ΘH_α` on
//! the domain of `H_α`. `J²` is two successive cumulative passes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::domain::GridFunction;
use crate::error::{Error, Result};
use crate::spectrum::{self, degeneracy_of, DegeneracyFlag, ModelParams};
use crate::I;

pub const DEFAULT_SERIES_CUTOFF: usize = 1000;

/// Number of trailing partial-sum increments summed into
/// [`SeriesOutput::tail`].
pub const TAIL_TERMS: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricConfig {
    pub alpha: f64,
    pub d: f64,
    /// Last index `J_max` kept by the series variants.
    pub series_cutoff: usize,
}

impl MetricConfig {
    pub fn new(alpha: f64, d: f64) -> Result<Self> {
        Self::with_cutoff(alpha, d, DEFAULT_SERIES_CUTOFF)
    }

    pub fn with_cutoff(alpha: f64, d: f64, series_cutoff: usize) -> Result<Self> {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidParams(format!("d must be positive, got {d}")));
        }
        if !alpha.is_finite() {
            return Err(Error::InvalidParams(format!("alpha must be finite, got {alpha}")));
        }
        if series_cutoff < 1 {
            return Err(Error::InvalidParams("series cutoff must be at least 1".into()));
        }
        Ok(MetricConfig { alpha, d, series_cutoff })
    }

    pub fn params(&self) -> ModelParams {
        ModelParams { alpha: self.alpha, beta: 0.0, d: self.d }
    }

    pub fn degeneracy(&self) -> DegeneracyFlag {
        degeneracy_of(self.alpha, self.d)
    }

    fn check_grid(&self, psi: &GridFunction) -> Result<()> {
        let gd = psi.grid().d();
        if (gd - self.d).abs() > 1e-12 * self.d {
            return Err(Error::InvalidParams(format!(
                "metric configured for d = {}, function lives on d = {gd}",
                self.d
            )));
        }
        Ok(())
    }

    fn require_nondegenerate(&self) -> Result<()> {
        let flag = self.degeneracy();
        if flag.degenerate {
            Err(Error::Degenerate(flag))
        } else {
            Ok(())
        }
    }
}

/// `Jψ` and `J²ψ` with their endpoint values.
struct Antiderivatives {
    j1: GridFunction,
    j2: GridFunction,
}

impl Antiderivatives {
    fn of(psi: &GridFunction) -> Self {
        let j1 = psi.cumulative_integral();
        let j2 = j1.cumulative_integral();
        Antiderivatives { j1, j2 }
    }
}

fn theta0_from(ad: &Antiderivatives, d: f64) -> GridFunction {
    GridFunction::constant(ad.j1.grid(), -ad.j1.last() / d)
}

fn theta1_from(ad: &Antiderivatives, d: f64) -> GridFunction {
    let (j1d, j2d) = (ad.j1.last(), ad.j2.last());
    ad.j1.map_with_x(|x, j| j * 2.0 - j1d * (x / d) - j2d / d)
}

fn theta2_from(ad: &Antiderivatives, d: f64) -> GridFunction {
    let j2d = ad.j2.last();
    ad.j2.map_with_x(|x, j| -j + j2d * (x / d))
}

/// `Θ₀ψ`, the constant `−(1/d)(Jψ)(d)`.
pub fn theta0_apply(psi: &GridFunction) -> GridFunction {
    let d = psi.grid().d();
    GridFunction::constant(psi.grid(), -psi.cumulative_integral().last() / d)
}

/// `Θ₁ψ = 2Jψ − (x/d)(Jψ)(d) − (1/d)(J²ψ)(d)`.
pub fn theta1_apply(psi: &GridFunction) -> GridFunction {
    theta1_from(&Antiderivatives::of(psi), psi.grid().d())
}

/// `Θ₂ψ = −J²ψ + (x/d)(J²ψ)(d)`; vanishes at both ends.
pub fn theta2_apply(psi: &GridFunction) -> GridFunction {
    theta2_from(&Antiderivatives::of(psi), psi.grid().d())
}

/// `φ₀ = √(1/d)e^{iαx}` sampled on the grid of `like`.
pub(crate) fn phi0_on(like: &GridFunction, alpha: f64) -> GridFunction {
    let scale = (1.0 / like.grid().d()).sqrt();
    GridFunction::from_fn(like.grid(), |x| (I * (alpha * x)).exp() * scale)
}

/// Closed-form `Θ(α)ψ`.
///
/// Computed for every `α`, including degenerate ones (where `Θ` is only
/// non-negative); check [`MetricConfig::degeneracy`] before relying on
/// positivity.
pub fn theta_apply_closed(psi: &GridFunction, cfg: &MetricConfig) -> Result<GridFunction> {
    cfg.check_grid(psi)?;
    let (alpha, d) = (cfg.alpha, cfg.d);
    let ad = Antiderivatives::of(psi);
    let phi0 = phi0_on(psi, alpha);
    let projection = phi0.inner_unchecked(psi);

    let mut out = psi.clone();
    out.axpy_unchecked(projection, &phi0);
    out.axpy_unchecked(Complex64::new(1.0, 0.0), &theta0_from(&ad, d));
    if alpha != 0.0 {
        out.axpy_unchecked(I * alpha, &theta1_from(&ad, d));
        out.axpy_unchecked(Complex64::new(alpha * alpha, 0.0), &theta2_from(&ad, d));
    }
    Ok(out)
}

/// Truncated series together with the size of its last few terms.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesOutput {
    pub value: GridFunction,
    /// Norm of the sum of the last [`TAIL_TERMS`] increments.
    pub tail: f64,
}

fn truncated_series(
    psi: &GridFunction,
    cutoff: usize,
    mut term: impl FnMut(usize) -> Result<(GridFunction, GridFunction)>,
) -> Result<SeriesOutput> {
    let mut value = GridFunction::zeros(psi.grid());
    let mut tail = GridFunction::zeros(psi.grid());
    let tail_start = (cutoff + 1).saturating_sub(TAIL_TERMS);
    for j in 0..=cutoff {
        let (left, right) = term(j)?;
        let c = left.inner_unchecked(psi);
        value.axpy_unchecked(c, &right);
        if j >= tail_start {
            tail.axpy_unchecked(c, &right);
        }
    }
    Ok(SeriesOutput { value, tail: tail.norm() })
}

/// `Σ_{j ≤ J_max} φ_j(φ_j, ψ)`. Rejects degenerate `α`.
pub fn theta_apply_series(psi: &GridFunction, cfg: &MetricConfig) -> Result<SeriesOutput> {
    cfg.check_grid(psi)?;
    cfg.require_nondegenerate()?;
    let grid = psi.grid().clone();
    truncated_series(psi, cfg.series_cutoff, |j| {
        let phi = spectrum::phi_unchecked(j, cfg.alpha, cfg.d).sample(&grid);
        Ok((phi.clone(), phi))
    })
}

/// `Σ_{j ≤ J_max} ψ_j(ψ_j, ψ)`, the formal inverse of `Θ(α)`. Only ever a
/// truncation; compare against the identity to measure its quality.
pub fn theta_inverse_series(psi: &GridFunction, cfg: &MetricConfig) -> Result<SeriesOutput> {
    cfg.check_grid(psi)?;
    cfg.require_nondegenerate()?;
    let grid = psi.grid().clone();
    let params = cfg.params();
    truncated_series(psi, cfg.series_cutoff, |j| {
        let eig = spectrum::psi_eigenfunction(j, &params)?.sample(&grid);
        Ok((eig.clone(), eig))
    })
}

/// `(ψ, Θψ)` evaluated as
/// `|(φ₀, ψ)|² + ‖ψ + iαJψ‖² − |(χ₀^N, ψ + iαJψ)|²`,
/// which is real and non-negative by Cauchy–Schwarz.
pub fn quadratic_form(psi: &GridFunction, cfg: &MetricConfig) -> Result<f64> {
    cfg.check_grid(psi)?;
    let phi0 = phi0_on(psi, cfg.alpha);
    let projection = phi0.inner_unchecked(psi).norm_sqr();
    let mut shifted = psi.clone();
    shifted.axpy_unchecked(I * cfg.alpha, &psi.cumulative_integral());
    let mean = shifted.integral() * (1.0 / cfg.d).sqrt();
    Ok(projection + shifted.norm_sqr() - mean.norm_sqr())
}

/// Coefficient `3 + 4|α|d + 2α²d²` of the bound `‖Θψ‖ ≤ c‖ψ‖`.
pub fn norm_bound_coefficient(cfg: &MetricConfig) -> f64 {
    let ad = cfg.alpha.abs() * cfg.d;
    3.0 + 4.0 * ad + 2.0 * ad * ad
}
