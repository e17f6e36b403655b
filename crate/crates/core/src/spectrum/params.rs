use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance on the fractional part of `αd/π` when testing degeneracy.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Physical parameters `(α, β, d)` of the boundary conditions
/// `ψ'(0) + (β + iα)ψ(0) = 0`, `-ψ'(d) + (β - iα)ψ(d) = 0`
/// on the interval `(0, d)`. `β = 0` is the solvable model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    pub d: f64,
}

impl ModelParams {
    pub fn new(alpha: f64, beta: f64, d: f64) -> Result<Self> {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidParams(format!("d must be positive and finite, got {d}")));
        }
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::InvalidParams(format!("alpha and beta must be finite, got ({alpha}, {beta})")));
        }
        Ok(ModelParams { alpha, beta, d })
    }

    /// `β = 0`.
    pub fn robin(alpha: f64, d: f64) -> Result<Self> {
        Self::new(alpha, 0.0, d)
    }

    /// `k_j = jπ/d`.
    #[inline]
    pub fn wavenumber(&self, j: usize) -> f64 {
        j as f64 * std::f64::consts::PI / self.d
    }

    pub(crate) fn require_solvable(&self) -> Result<()> {
        if self.beta != 0.0 {
            return Err(Error::InvalidParams(format!(
                "closed-form eigenfunctions exist for beta = 0 only (got beta = {})",
                self.beta
            )));
        }
        Ok(())
    }
}

/// Whether `αd/π` is a non-zero integer, i.e. two eigenvalues collide and
/// the metric loses strict positivity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegeneracyFlag {
    pub degenerate: bool,
    /// The integer `m = αd/π` when degenerate.
    pub m: Option<i64>,
}

impl DegeneracyFlag {
    pub const NONE: DegeneracyFlag = DegeneracyFlag { degenerate: false, m: None };
}

/// Flags exactly the `α` with `αd/π ∈ ℤ \ {0}`.
pub fn check_nondegenerate(params: &ModelParams) -> DegeneracyFlag {
    degeneracy_of(params.alpha, params.d)
}

pub(crate) fn degeneracy_of(alpha: f64, d: f64) -> DegeneracyFlag {
    let ratio = alpha * d / std::f64::consts::PI;
    let m = ratio.round();
    if m != 0.0 && (ratio - m).abs() <= DEGENERACY_TOLERANCE * m.abs().max(1.0) {
        DegeneracyFlag { degenerate: true, m: Some(m as i64) }
    } else {
        DegeneracyFlag::NONE
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn validation() {
        assert!(ModelParams::new(0.5, 0.0, 0.0).is_err());
        assert!(ModelParams::new(f64::INFINITY, 0.0, 1.0).is_err());
        assert!(ModelParams::new(0.5, f64::NAN, 1.0).is_err());
        assert!(ModelParams::new(-3.0, 2.0, 0.1).is_ok());
    }

    #[test]
    fn degeneracy_examples() {
        assert_eq!(check_nondegenerate(&ModelParams::robin(0.0, 7.0).unwrap()), DegeneracyFlag::NONE);
        let f = check_nondegenerate(&ModelParams::robin(1.0, PI).unwrap());
        assert!(f.degenerate);
        assert_eq!(f.m, Some(1));
        assert!(!check_nondegenerate(&ModelParams::robin(0.5, PI).unwrap()).degenerate);
        let neg = check_nondegenerate(&ModelParams::robin(-2.0, PI).unwrap());
        assert_eq!(neg.m, Some(-2));
        assert_eq!(check_nondegenerate(&ModelParams::robin(3.0, 2.0 * PI).unwrap()).m, Some(6));
    }

    #[test]
    fn small_perturbation_flips_flag() {
        for m in [1.0, 2.0, -3.0] {
            assert!(degeneracy_of(m, PI).degenerate);
            assert!(!degeneracy_of(m + 1e-6, PI).degenerate);
            assert!(!degeneracy_of(m - 1e-6, PI).degenerate);
        }
    }
}
