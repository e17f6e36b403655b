use std::io::{Read, Write};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::grid::{Grid, Quadrature};
use crate::error::{Error, Result};

/// Complex function sampled at the `n + 1` nodes of a [`Grid`].
#[derive(Debug, Clone, PartialEq)]
pub struct GridFunction {
    grid: Grid,
    values: Vec<Complex64>,
}

impl GridFunction {
    pub fn new(grid: Grid, values: Vec<Complex64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::SampleCount { expected: grid.len(), actual: values.len() });
        }
        if let Some(i) = values.iter().position(|v| !(v.re.is_finite() && v.im.is_finite())) {
            return Err(Error::NonFinite(i));
        }
        Ok(GridFunction { grid, values })
    }

    pub fn zeros(grid: &Grid) -> Self {
        Self::constant(grid, Complex64::new(0.0, 0.0))
    }

    pub fn constant(grid: &Grid, c: Complex64) -> Self {
        GridFunction { grid: grid.clone(), values: vec![c; grid.len()] }
    }

    /// Pointwise evaluation of `f` at the nodes.
    ///
    /// Panics if `f` returns a non-finite value.
    pub fn from_fn(grid: &Grid, f: impl Fn(f64) -> Complex64) -> Self {
        let values: Vec<Complex64> = grid.nodes().map(f).collect();
        assert!(
            values.iter().all(|v| v.re.is_finite() && v.im.is_finite()),
            "sampled function produced non-finite values"
        );
        GridFunction { grid: grid.clone(), values }
    }

    #[inline]
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    #[inline]
    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    #[inline]
    pub fn first(&self) -> Complex64 {
        self.values[0]
    }

    #[inline]
    pub fn last(&self) -> Complex64 {
        self.values[self.grid.n()]
    }

    /// `∫₀^d conj(self)·other`, antilinear in `self`.
    pub fn inner_product(&self, other: &GridFunction) -> Result<Complex64> {
        self.grid.check_same(&other.grid)?;
        Ok(self.inner_unchecked(other))
    }

    pub(crate) fn inner_unchecked(&self, other: &GridFunction) -> Complex64 {
        self.grid
            .weights()
            .iter()
            .zip(self.values.iter().zip(&other.values))
            .map(|(w, (f, g))| (f.conj() * g) * *w)
            .sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.grid.weights().iter().zip(&self.values).map(|(w, f)| w * f.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `∫₀^d self`.
    pub fn integral(&self) -> Complex64 {
        self.grid.weights().iter().zip(&self.values).map(|(w, f)| f * *w).sum()
    }

    /// The operator `J`: `(Jf)(x) = ∫₀^x f`, accumulated panel by panel.
    /// `(Jf)(0)` is exactly zero.
    pub fn cumulative_integral(&self) -> GridFunction {
        let n = self.grid.n();
        let mut out = Vec::with_capacity(n + 1);
        let mut acc = Complex64::new(0.0, 0.0);
        out.push(acc);
        for i in 0..n {
            acc += self.grid.panel(i).apply(&self.values);
            out.push(acc);
        }
        GridFunction { grid: self.grid.clone(), values: out }
    }

    pub fn scale(&self, c: Complex64) -> GridFunction {
        self.map(|v| v * c)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> GridFunction {
        GridFunction { grid: self.grid.clone(), values: self.values.iter().map(|&v| f(v)).collect() }
    }

    /// Combine pointwise with the node coordinate available: `f(x_i, self_i)`.
    pub fn map_with_x(&self, f: impl Fn(f64, Complex64) -> Complex64) -> GridFunction {
        let values = self.grid.nodes().zip(&self.values).map(|(x, &v)| f(x, v)).collect();
        GridFunction { grid: self.grid.clone(), values }
    }

    /// `self += a·other`.
    pub fn axpy(&mut self, a: Complex64, other: &GridFunction) -> Result<()> {
        self.grid.check_same(&other.grid)?;
        self.axpy_unchecked(a, other);
        Ok(())
    }

    pub(crate) fn axpy_unchecked(&mut self, a: Complex64, other: &GridFunction) {
        for (s, o) in self.values.iter_mut().zip(&other.values) {
            *s += a * o;
        }
    }

    pub fn add(&self, other: &GridFunction) -> Result<GridFunction> {
        let mut out = self.clone();
        out.axpy(Complex64::new(1.0, 0.0), other)?;
        Ok(out)
    }

    pub fn sub(&self, other: &GridFunction) -> Result<GridFunction> {
        let mut out = self.clone();
        out.axpy(Complex64::new(-1.0, 0.0), other)?;
        Ok(out)
    }

    /// Largest pointwise modulus.
    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Same samples on the same nodes, integrated with another rule.
    pub fn with_quadrature(&self, rule: Quadrature) -> GridFunction {
        GridFunction { grid: self.grid.with_quadrature(rule), values: self.values.clone() }
    }

    pub fn to_json(&self) -> GridFunctionFile {
        GridFunctionFile {
            d: self.grid.d(),
            n: self.grid.n(),
            values: self.values.iter().map(|v| [v.re, v.im]).collect(),
        }
    }

    pub fn write_json<W: Write>(&self, writer: W) -> Result<()> {
        serde_json::to_writer_pretty(writer, &self.to_json())?;
        Ok(())
    }

    /// Parse the JSON file format; the grid gets `rule` as its quadrature.
    pub fn read_json<R: Read>(reader: R, rule: Quadrature) -> Result<GridFunction> {
        let file: GridFunctionFile = serde_json::from_reader(reader)?;
        file.into_function(rule)
    }
}

/// On-disk representation: `{"d": .., "n": .., "values": [[re, im], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridFunctionFile {
    pub d: f64,
    pub n: usize,
    pub values: Vec<[f64; 2]>,
}

impl GridFunctionFile {
    pub fn into_function(self, rule: Quadrature) -> Result<GridFunction> {
        let grid = Grid::with_rule(self.d, self.n, rule)?;
        GridFunction::new(grid, self.values.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
    }
}
