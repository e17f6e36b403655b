//! Numerics for the PT-symmetric Laplacian on `(0, d)` with the Robin
//! conditions `ψ'(0) + iαψ(0) = 0 = ψ'(d) + iαψ(d)`.
//!
//! The crate is split along the lines of the problem:
//!
//! - [`domain`]: uniform grids, sampled complex functions, quadrature inner
//!   products, the cumulative integral `J`, and closed-form test functions
//!   that carry exact derivatives.
//! - [`spectrum`]: the exact spectrum of `H_α`, the biorthonormal eigenbases
//!   of `H_α` and `H_α* = H_{-α}`, and a root finder for the two-parameter
//!   `(α, β)` boundary conditions, where complex pairs can appear.
//! - [`metric`]: the closed-form metric `Θ(α)`, its eigen-series and inverse
//!   series, and the positivity quadratic form.
//! - [`verify`]: every identity of the model as a numerical check with an
//!   attributed tolerance, aggregated into a [`verify::VerificationReport`].

pub mod domain;
pub mod error;
pub mod metric;
pub mod spectrum;
pub mod verify;

pub use num_complex::Complex64;

pub use domain::{AnalyticTestFunction, Grid, GridFunction, Quadrature};
pub use error::{Error, Result};
pub use metric::MetricConfig;
pub use spectrum::{DegeneracyFlag, ModelParams, SpectralPair};

/// Imaginary unit.
pub const I: Complex64 = Complex64::new(0.0, 1.0);
