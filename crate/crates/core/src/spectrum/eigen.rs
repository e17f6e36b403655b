//! Eigenvalues and biorthonormal eigenfunctions of `H_α` (`β = 0`).
//!
//! With `k_j = jπ/d` the spectrum is `{α²} ∪ {k_j²}_{j≥1}`; index `j = 0`
//! always refers to `α²`, whatever its position in the ordering.
//!
//! The adjoint eigenfunctions use the fixed normalization `B_0 = √(1/d)`,
//! `B_j = √(2/d)`, so that `φ_0 = √(1/d)e^{iαx}` and
//! `φ_j = χ_j^N + i(α/k_j)χ_j^D`. The `A_j` of `ψ_j` then follow from
//! `(φ_j, ψ_k) = δ_jk`:
//!
//! - `A_0 = e^{iαd} / (B_0·d·sinc(αd))` (equal to `√(1/d)` at `α = 0`),
//! - `A_j = √(2/d)·k_j²/(k_j² − α²)`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::params::{check_nondegenerate, ModelParams};
use crate::domain::AnalyticTestFunction;
use crate::error::{Error, Result};
use crate::I;

/// Index, eigenvalue and normalization constants of one biorthonormal pair
/// `(ψ_j, φ_j)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPair {
    pub j: usize,
    /// `k_j = jπ/d` for `j ≥ 1`; `None` on the `j = 0` branch.
    pub k: Option<f64>,
    pub eigenvalue: Complex64,
    /// Normalization of `ψ_j`.
    pub a: Complex64,
    /// Normalization of `φ_j`.
    pub b: Complex64,
}

impl SpectralPair {
    /// Right-hand side of the normalization condition, `A_j·conj(B_j)·N_j`
    /// where `N_0 = (1 − e^{−2iαd})/(2iα)` and `N_j = (k_j² − α²)d/(2k_j²)`.
    /// Equals one for a correctly normalized pair.
    pub fn normalization_product(&self, params: &ModelParams) -> Complex64 {
        let (alpha, d) = (params.alpha, params.d);
        let factor = match self.k {
            None => (-I * alpha * d).exp() * d * sinc(alpha * d),
            Some(k) => Complex64::new((k * k - alpha * alpha) * d / (2.0 * k * k), 0.0),
        };
        self.a * self.b.conj() * factor
    }
}

/// `sin(t)/t`, continuous at zero.
pub fn sinc(t: f64) -> f64 {
    if t.abs() < 1e-4 {
        let t2 = t * t;
        1.0 - t2 / 6.0 + t2 * t2 / 120.0
    } else {
        t.sin() / t
    }
}

/// `α²` for `j = 0`, `(jπ/d)²` otherwise. `β` is ignored.
pub fn eigenvalue(j: usize, params: &ModelParams) -> f64 {
    if j == 0 {
        params.alpha * params.alpha
    } else {
        let k = params.wavenumber(j);
        k * k
    }
}

/// Normalized Neumann mode: `√(1/d)` for `j = 0`, `√(2/d)cos(k_j x)` otherwise.
pub fn chi_neumann(j: usize, d: f64) -> AnalyticTestFunction {
    if j == 0 {
        AnalyticTestFunction::constant(Complex64::new((1.0 / d).sqrt(), 0.0))
    } else {
        AnalyticTestFunction::cos(Complex64::new((2.0 / d).sqrt(), 0.0), j as f64 * std::f64::consts::PI / d)
    }
}

/// Normalized Dirichlet mode `√(2/d)sin(k_j x)`, `j ≥ 1`.
pub fn chi_dirichlet(j: usize, d: f64) -> Result<AnalyticTestFunction> {
    if j == 0 {
        return Err(Error::InvalidIndex(0));
    }
    Ok(AnalyticTestFunction::sin(Complex64::new((2.0 / d).sqrt(), 0.0), j as f64 * std::f64::consts::PI / d))
}

/// Eigenvalue and normalization constants of the `j`-th pair.
///
/// Fails for `β ≠ 0` and for degenerate `α` (where `A_j` is unbounded).
pub fn spectral_pair(j: usize, params: &ModelParams) -> Result<SpectralPair> {
    params.require_solvable()?;
    let flag = check_nondegenerate(params);
    if flag.degenerate {
        return Err(Error::Degenerate(flag));
    }
    let (alpha, d) = (params.alpha, params.d);
    let eigenvalue = Complex64::new(eigenvalue(j, params), 0.0);
    if j == 0 {
        let b = (1.0 / d).sqrt();
        let a = (I * alpha * d).exp() / (b * d * sinc(alpha * d));
        Ok(SpectralPair { j, k: None, eigenvalue, a, b: Complex64::new(b, 0.0) })
    } else {
        let k = params.wavenumber(j);
        let b = (2.0 / d).sqrt();
        let a = b * k * k / (k * k - alpha * alpha);
        Ok(SpectralPair { j, k: Some(k), eigenvalue, a: Complex64::new(a, 0.0), b: Complex64::new(b, 0.0) })
    }
}

/// Eigenfunction `ψ_j` of `H_α`, normalized against [`phi_eigenfunction`].
pub fn psi_eigenfunction(j: usize, params: &ModelParams) -> Result<AnalyticTestFunction> {
    let pair = spectral_pair(j, params)?;
    Ok(match pair.k {
        None => AnalyticTestFunction::exp(pair.a, -I * params.alpha),
        Some(k) => {
            AnalyticTestFunction::cos(pair.a, k).plus(&AnalyticTestFunction::sin(-I * pair.a * (params.alpha / k), k))
        }
    })
}

/// Eigenfunction `φ_j` of the adjoint `H_α* = H_{−α}`. Defined for every `α`.
pub fn phi_eigenfunction(j: usize, params: &ModelParams) -> Result<AnalyticTestFunction> {
    params.require_solvable()?;
    Ok(phi_unchecked(j, params.alpha, params.d))
}

pub(crate) fn phi_unchecked(j: usize, alpha: f64, d: f64) -> AnalyticTestFunction {
    if j == 0 {
        AnalyticTestFunction::exp(Complex64::new((1.0 / d).sqrt(), 0.0), I * alpha)
    } else {
        let k = j as f64 * std::f64::consts::PI / d;
        let b = (2.0 / d).sqrt();
        AnalyticTestFunction::cos(Complex64::new(b, 0.0), k).plus(&AnalyticTestFunction::sin(I * (b * alpha / k), k))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::domain::Grid;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn params(alpha: f64, d: f64) -> ModelParams {
        ModelParams::robin(alpha, d).unwrap()
    }

    #[test]
    fn eigenvalue_examples() {
        assert_eq!(eigenvalue(0, &params(0.0, 1.0)), 0.0);
        assert!((eigenvalue(2, &params(0.3, PI)) - 4.0).abs() < 1e-14);
        assert_eq!(eigenvalue(0, &params(0.5, PI)), 0.25);
    }

    #[test]
    fn psi_limits_at_zero_alpha() {
        let p = params(0.0, PI);
        let psi0 = psi_eigenfunction(0, &p).unwrap();
        for x in [0.0, 1.0, 3.0] {
            assert!((psi0.eval(x) - (1.0 / PI).sqrt()).norm() < 1e-15);
        }
        let psi1 = psi_eigenfunction(1, &p).unwrap();
        let chi1 = chi_neumann(1, PI);
        for x in [0.0, 0.7, 2.0] {
            assert!((psi1.eval(x) - chi1.eval(x)).norm() < 1e-15);
        }
    }

    #[test]
    fn normalization_at_half_alpha() {
        let p = params(0.5, PI);
        let pair = spectral_pair(1, &p).unwrap();
        assert!((pair.a.re - (2.0 / PI).sqrt() * 4.0 / 3.0).abs() < 1e-14);
        assert_eq!(pair.a.im, 0.0);
        for j in 0..6 {
            let pair = spectral_pair(j, &p).unwrap();
            assert!((pair.normalization_product(&p) - 1.0).norm() < 1e-14, "j = {j}");
        }
    }

    #[test]
    fn phi_examples() {
        let phi0 = phi_eigenfunction(0, &params(0.0, 4.0)).unwrap();
        assert!((phi0.eval(1.3) - 0.5).norm() < 1e-15);
        let p = params(0.5, PI);
        let phi1 = phi_eigenfunction(1, &p).unwrap();
        let expect = |x: f64| chi_neumann(1, PI).eval(x) + I * 0.5 * chi_dirichlet(1, PI).unwrap().eval(x);
        for x in [0.0, 1.1, 2.9] {
            assert!((phi1.eval(x) - expect(x)).norm() < 1e-15);
        }
    }

    #[test]
    fn chi_examples() {
        assert!((chi_neumann(0, 4.0).eval(2.2) - 0.5).norm() < 1e-15);
        let g = Grid::new(PI, 2048).unwrap();
        assert!((chi_dirichlet(3, PI).unwrap().sample(&g).norm() - 1.0).abs() < 1e-10);
        let chi = chi_dirichlet(5, 2.0).unwrap();
        assert!(chi.eval(0.0).norm() == 0.0);
        assert!(chi.eval(2.0).norm() < 1e-15);
        assert!(chi_dirichlet(0, 1.0).is_err());
    }

    #[test]
    fn degenerate_alpha_is_refused() {
        let p = params(1.0, PI);
        assert!(matches!(psi_eigenfunction(0, &p), Err(Error::Degenerate(_))));
        assert!(matches!(psi_eigenfunction(1, &p), Err(Error::Degenerate(_))));
        assert!(phi_eigenfunction(1, &p).is_ok());
    }

    #[test]
    fn beta_model_has_no_closed_form() {
        let p = ModelParams::new(0.5, 1.0, PI).unwrap();
        assert!(psi_eigenfunction(1, &p).is_err());
        assert!(phi_eigenfunction(1, &p).is_err());
    }

    proptest! {
        #[test]
        fn psi_satisfies_robin_and_eigen_equation(
            alpha in -3.0f64..3.0, d in 0.5f64..5.0, j in 0usize..25,
        ) {
            let p = params(alpha, d);
            prop_assume!((alpha * d / PI - (alpha * d / PI).round()).abs() > 1e-3 || (alpha * d / PI).round() == 0.0);
            let psi = psi_eigenfunction(j, &p).unwrap();
            let bv = psi.boundary_values(d);
            let e = eigenvalue(j, &p);
            // sin(jπ) rounds to O(jε), amplified by k and the amplitude
            let scale = (1.0 + j as f64) * (1.0 + e.sqrt()) * (1.0 + bv.left.norm());
            prop_assert!((bv.left_slope + I * alpha * bv.left).norm() < 1e-14 * scale);
            prop_assert!((bv.right_slope + I * alpha * bv.right).norm() < 1e-14 * scale);
            for x in [0.0, 0.3 * d, 0.77 * d] {
                let r = -psi.derivative(2, x) - psi.eval(x) * e;
                prop_assert!(r.norm() < 1e-11 * (1.0 + e) * (1.0 + psi.eval(x).norm()));
            }
        }

        #[test]
        fn phi_solves_the_adjoint_problem(
            alpha in -3.0f64..3.0, d in 0.5f64..5.0, j in 0usize..25,
        ) {
            // H_α* = H_{−α}: φ_j satisfies ψ' − iαψ = 0 at both ends
            let p = params(alpha, d);
            let phi = phi_eigenfunction(j, &p).unwrap();
            let bv = phi.boundary_values(d);
            let e = eigenvalue(j, &p);
            let scale = (1.0 + j as f64) * (1.0 + e.sqrt()) * (1.0 + bv.left.norm());
            prop_assert!((bv.left_slope - I * alpha * bv.left).norm() < 1e-14 * scale);
            prop_assert!((bv.right_slope - I * alpha * bv.right).norm() < 1e-14 * scale);
            let x = 0.41 * d;
            prop_assert!((-phi.derivative(2, x) - phi.eval(x) * e).norm() < 1e-11 * (1.0 + e));
        }
    }
}
