use std::f64::consts::FRAC_PI_2;

use num_complex::Complex64;

use super::function::GridFunction;
use super::grid::Grid;
use crate::error::{Error, Result};

/// One term of an [`AnalyticTestFunction`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Term {
    /// `c·e^{μx}` with complex rate `μ` (so `e^{iλx}` is `μ = iλ`).
    Exp { coeff: Complex64, rate: Complex64 },
    /// `c·cos(λx)`.
    Cos { coeff: Complex64, rate: f64 },
    /// `c·sin(λx)`.
    Sin { coeff: Complex64, rate: f64 },
    /// `c₀ + c₁x + c₂x²`.
    Poly { coeffs: [Complex64; 3] },
}

impl Term {
    fn derivative(&self, order: u32, x: f64) -> Complex64 {
        match *self {
            Term::Exp { coeff, rate } => coeff * rate.powu(order) * (rate * x).exp(),
            Term::Cos { coeff, rate } => coeff * rate.powi(order as i32) * (rate * x + order as f64 * FRAC_PI_2).cos(),
            Term::Sin { coeff, rate } => coeff * rate.powi(order as i32) * (rate * x + order as f64 * FRAC_PI_2).sin(),
            Term::Poly { coeffs: [c0, c1, c2] } => match order {
                0 => c0 + c1 * x + c2 * x * x,
                1 => c1 + c2 * (2.0 * x),
                2 => c2 * 2.0,
                _ => Complex64::new(0.0, 0.0),
            },
        }
    }

    fn scaled(&self, s: Complex64) -> Term {
        match *self {
            Term::Exp { coeff, rate } => Term::Exp { coeff: coeff * s, rate },
            Term::Cos { coeff, rate } => Term::Cos { coeff: coeff * s, rate },
            Term::Sin { coeff, rate } => Term::Sin { coeff: coeff * s, rate },
            Term::Poly { coeffs } => Term::Poly { coeffs: coeffs.map(|c| c * s) },
        }
    }

    fn is_finite(&self) -> bool {
        let ok = |c: Complex64| c.re.is_finite() && c.im.is_finite();
        match *self {
            Term::Exp { coeff, rate } => ok(coeff) && ok(rate),
            Term::Cos { coeff, rate } | Term::Sin { coeff, rate } => ok(coeff) && rate.is_finite(),
            Term::Poly { coeffs } => coeffs.iter().all(|&c| ok(c)),
        }
    }
}

/// Closed-form function on `[0, d]`: a finite sum of exponential,
/// trigonometric and (degree ≤ 2) polynomial terms.
///
/// Derivatives of any order are exact, term by term. This is the only kind
/// of input accepted where `ψ'` or `ψ''` is needed; sampled data is never
/// differentiated numerically.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AnalyticTestFunction {
    terms: Vec<Term>,
}

impl AnalyticTestFunction {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: Vec<Term>) -> Result<Self> {
        if terms.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidParams("non-finite coefficient or rate".into()));
        }
        Ok(AnalyticTestFunction { terms })
    }

    pub fn constant(c: Complex64) -> Self {
        Self::poly([c, Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)])
    }

    pub fn poly(coeffs: [Complex64; 3]) -> Self {
        AnalyticTestFunction { terms: vec![Term::Poly { coeffs }] }
    }

    pub fn exp(coeff: Complex64, rate: Complex64) -> Self {
        AnalyticTestFunction { terms: vec![Term::Exp { coeff, rate }] }
    }

    pub fn cos(coeff: Complex64, rate: f64) -> Self {
        AnalyticTestFunction { terms: vec![Term::Cos { coeff, rate }] }
    }

    pub fn sin(coeff: Complex64, rate: f64) -> Self {
        AnalyticTestFunction { terms: vec![Term::Sin { coeff, rate }] }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        self.derivative(0, x)
    }

    /// Exact derivative of the given order at `x`.
    pub fn derivative(&self, order: u32, x: f64) -> Complex64 {
        self.terms.iter().map(|t| t.derivative(order, x)).sum()
    }

    /// `(ψ(0), ψ(d), ψ'(0), ψ'(d))`.
    pub fn boundary_values(&self, d: f64) -> BoundaryValues {
        BoundaryValues {
            left: self.eval(0.0),
            right: self.eval(d),
            left_slope: self.derivative(1, 0.0),
            right_slope: self.derivative(1, d),
        }
    }

    /// Pointwise evaluation at the grid nodes (no quadrature involved).
    pub fn sample(&self, grid: &Grid) -> GridFunction {
        self.sample_derivative(0, grid)
    }

    pub fn sample_derivative(&self, order: u32, grid: &Grid) -> GridFunction {
        GridFunction::from_fn(grid, |x| self.derivative(order, x))
    }

    pub fn scale(&self, s: Complex64) -> Self {
        AnalyticTestFunction { terms: self.terms.iter().map(|t| t.scaled(s)).collect() }
    }

    /// `self + other`, concatenating the term lists.
    pub fn plus(&self, other: &AnalyticTestFunction) -> Self {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&other.terms);
        AnalyticTestFunction { terms }
    }

    /// `c·self + other`.
    pub fn scaled_plus(&self, c: Complex64, other: &AnalyticTestFunction) -> Self {
        self.scale(c).plus(other)
    }

    /// The exact derivative as another analytic function.
    pub fn differentiate(&self) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|t| match *t {
                Term::Exp { coeff, rate } => Term::Exp { coeff: coeff * rate, rate },
                Term::Cos { coeff, rate } => Term::Sin { coeff: -coeff * rate, rate },
                Term::Sin { coeff, rate } => Term::Cos { coeff: coeff * rate, rate },
                Term::Poly { coeffs: [_, c1, c2] } => Term::Poly { coeffs: [c1, c2 * 2.0, Complex64::new(0.0, 0.0)] },
            })
            .collect();
        AnalyticTestFunction { terms }
    }

    /// Pointwise product with `e^{μx}`.
    ///
    /// Trig terms are rewritten as exponentials; polynomial terms of
    /// positive degree would leave the family and are rejected.
    pub fn modulate(&self, rate: Complex64) -> Result<Self> {
        let i = Complex64::new(0.0, 1.0);
        let mut terms = Vec::with_capacity(2 * self.terms.len());
        for t in &self.terms {
            match *t {
                Term::Exp { coeff, rate: r } => terms.push(Term::Exp { coeff, rate: r + rate }),
                Term::Cos { coeff, rate: l } => {
                    terms.push(Term::Exp { coeff: coeff * 0.5, rate: rate + i * l });
                    terms.push(Term::Exp { coeff: coeff * 0.5, rate: rate - i * l });
                }
                Term::Sin { coeff, rate: l } => {
                    // sin(lx) = (e^{ilx} - e^{-ilx}) / 2i
                    let half = coeff / (2.0 * i);
                    terms.push(Term::Exp { coeff: half, rate: rate + i * l });
                    terms.push(Term::Exp { coeff: -half, rate: rate - i * l });
                }
                Term::Poly { coeffs: [c0, c1, c2] } => {
                    if c1 != Complex64::new(0.0, 0.0) || c2 != Complex64::new(0.0, 0.0) {
                        return Err(Error::Unsupported("modulating a non-constant polynomial"));
                    }
                    terms.push(Term::Exp { coeff: c0, rate });
                }
            }
        }
        Ok(AnalyticTestFunction { terms })
    }
}

/// Values and slopes at both ends of `[0, d]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryValues {
    pub left: Complex64,
    pub right: Complex64,
    pub left_slope: Complex64,
    pub right_slope: Complex64,
}
