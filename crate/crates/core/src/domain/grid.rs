use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default number of subintervals used by verification runs.
pub const DEFAULT_SUBINTERVALS: usize = 4096;

/// Composite quadrature rule used for inner products and the cumulative
/// integral `J`.
///
/// Both rules integrate piecewise panel by panel, so `J` and the full
/// integral are always consistent: `(Jf)(d)` equals the weighted sum of `f`
/// up to rounding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Quadrature {
    /// Composite trapezoid, error `O(h²)`.
    Trapezoid,
    /// Each panel `[x_i, x_{i+1}]` is integrated exactly against the cubic
    /// through four neighbouring nodes (shifted inwards at the ends).
    /// Error `O(h⁴)`; identical to the trapezoid away from the boundary.
    #[default]
    CubicPanel,
}

impl Quadrature {
    pub fn name(self) -> &'static str {
        match self {
            Quadrature::Trapezoid => "trapezoid",
            Quadrature::CubicPanel => "cubic-panel",
        }
    }

    /// Order `p` of the global error `O(h^p)`.
    pub fn order(self) -> u32 {
        match self {
            Quadrature::Trapezoid => 2,
            Quadrature::CubicPanel => 4,
        }
    }
}

impl std::str::FromStr for Quadrature {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "trapezoid" => Ok(Quadrature::Trapezoid),
            "cubic-panel" | "cubic" => Ok(Quadrature::CubicPanel),
            other => Err(Error::InvalidParams(format!("unknown quadrature rule `{other}`"))),
        }
    }
}

/// Stencil of one panel: first node index and weights in units of `h`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Panel {
    pub start: usize,
    pub weights: [f64; 4],
    pub len: usize,
}

impl Panel {
    #[inline]
    pub fn apply<T>(&self, values: &[T]) -> T
    where
        T: Copy + std::ops::Mul<f64, Output = T> + std::ops::Add<Output = T>,
    {
        let mut acc = values[self.start] * self.weights[0];
        for k in 1..self.len {
            acc = acc + values[self.start + k] * self.weights[k];
        }
        acc
    }
}

/// Uniform grid `x_i = i·d/n`, `i = 0..=n`, on `[0, d]`.
#[derive(Debug, Clone)]
pub struct Grid {
    d: f64,
    n: usize,
    rule: Quadrature,
    weights: Arc<[f64]>,
}

impl PartialEq for Grid {
    fn eq(&self, other: &Self) -> bool {
        self.d == other.d && self.n == other.n && self.rule == other.rule
    }
}

impl Grid {
    /// Grid with the default (cubic-panel) quadrature.
    pub fn new(d: f64, n: usize) -> Result<Self> {
        Self::with_rule(d, n, Quadrature::default())
    }

    pub fn with_rule(d: f64, n: usize, rule: Quadrature) -> Result<Self> {
        if !(d.is_finite() && d > 0.0) {
            return Err(Error::InvalidGrid(format!("interval length must be positive, got {d}")));
        }
        if n < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 subintervals, got {n}")));
        }
        let mut grid = Grid { d, n, rule, weights: Arc::from(Vec::new()) };
        grid.weights = grid.assemble_weights().into();
        Ok(grid)
    }

    #[inline]
    pub fn d(&self) -> f64 {
        self.d
    }

    /// Number of subintervals; the grid has `n + 1` nodes.
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.n + 1
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn rule(&self) -> Quadrature {
        self.rule
    }

    #[inline]
    pub fn h(&self) -> f64 {
        self.d / self.n as f64
    }

    #[inline]
    pub fn node(&self, i: usize) -> f64 {
        if i == self.n {
            self.d
        } else {
            i as f64 * self.h()
        }
    }

    pub fn nodes(&self) -> impl ExactSizeIterator<Item = f64> + '_ {
        (0..self.n + 1).map(move |i| self.node(i))
    }

    /// Same nodes, different quadrature.
    pub fn with_quadrature(&self, rule: Quadrature) -> Grid {
        Grid::with_rule(self.d, self.n, rule).expect("grid parameters already validated")
    }

    /// Grid with `factor` times as many subintervals.
    pub fn refined(&self, factor: usize) -> Grid {
        Grid::with_rule(self.d, self.n * factor.max(1), self.rule).expect("refinement keeps grid valid")
    }

    /// Quadrature weights (absolute, already multiplied by `h`).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub(crate) fn panel(&self, i: usize) -> Panel {
        debug_assert!(i < self.n);
        let h = self.h();
        match self.rule {
            Quadrature::Trapezoid => Panel { start: i, weights: [0.5 * h, 0.5 * h, 0.0, 0.0], len: 2 },
            Quadrature::CubicPanel if self.n == 2 => {
                // three nodes only: quadratic interpolant
                let w = if i == 0 { [5.0, 8.0, -1.0] } else { [-1.0, 8.0, 5.0] };
                Panel { start: 0, weights: [w[0] * h / 12.0, w[1] * h / 12.0, w[2] * h / 12.0, 0.0], len: 3 }
            }
            Quadrature::CubicPanel => {
                let start = i.saturating_sub(1).min(self.n - 3);
                let w = match i - start {
                    0 => [9.0, 19.0, -5.0, 1.0],
                    1 => [-1.0, 13.0, 13.0, -1.0],
                    _ => [1.0, -5.0, 19.0, 9.0],
                };
                Panel { start, weights: w.map(|c| c * h / 24.0), len: 4 }
            }
        }
    }

    fn assemble_weights(&self) -> Vec<f64> {
        let mut w = vec![0.0; self.len()];
        for i in 0..self.n {
            let p = self.panel(i);
            for k in 0..p.len {
                w[p.start + k] += p.weights[k];
            }
        }
        w
    }

    pub fn check_same(&self, other: &Grid) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::GridMismatch { left_d: self.d, left_n: self.n, right_d: other.d, right_n: other.n })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn rejects_bad_parameters() {
        assert!(Grid::new(0.0, 8).is_err());
        assert!(Grid::new(-1.0, 8).is_err());
        assert!(Grid::new(f64::NAN, 8).is_err());
        assert!(Grid::new(1.0, 1).is_err());
        assert!(Grid::new(1.0, 2).is_ok());
    }

    #[test]
    fn nodes_span_interval() {
        let g = Grid::new(std::f64::consts::PI, 7).unwrap();
        let x: Vec<f64> = g.nodes().collect();
        assert_eq!(x.len(), 8);
        assert_eq!(x[0], 0.0);
        assert_eq!(x[7], std::f64::consts::PI);
        assert!(x.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn weights_sum_to_length_and_are_positive() {
        for rule in [Quadrature::Trapezoid, Quadrature::CubicPanel] {
            for n in [2, 3, 4, 5, 6, 17, 1024] {
                let g = Grid::with_rule(2.5, n, rule).unwrap();
                let s: f64 = g.weights().iter().sum();
                assert_relative_eq!(s, 2.5, max_relative = 1e-14);
                assert!(g.weights().iter().all(|&w| w > 0.0), "{rule:?} n={n}");
            }
        }
    }

    #[test]
    fn cubic_panel_weights_match_closed_form() {
        let g = Grid::new(10.0, 10).unwrap();
        let w: Vec<f64> = g.weights().to_vec();
        let expect = [8.0, 31.0, 20.0, 25.0, 24.0, 24.0, 24.0, 25.0, 20.0, 31.0, 8.0];
        for (a, b) in w.iter().zip(expect) {
            assert_relative_eq!(*a, b / 24.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn cubic_panel_is_exact_for_cubics() {
        let g = Grid::new(1.7, 9).unwrap();
        let s: f64 = g.nodes().zip(g.weights()).map(|(x, w)| w * (x * x * x - 2.0 * x + 0.5)).sum();
        let d: f64 = 1.7;
        assert_relative_eq!(s, d.powi(4) / 4.0 - d * d + 0.5 * d, max_relative = 1e-13);
    }

    #[test]
    fn quadrature_names_round_trip() {
        for rule in [Quadrature::Trapezoid, Quadrature::CubicPanel] {
            assert_eq!(rule.name().parse::<Quadrature>().unwrap(), rule);
        }
        assert!("simpson".parse::<Quadrature>().is_err());
    }
}
