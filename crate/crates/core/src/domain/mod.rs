//! Grids, sampled functions, quadrature and the cumulative integral `J`.

mod analytic;
mod function;
mod grid;

pub use analytic::{AnalyticTestFunction, BoundaryValues, Term};
pub use function::{GridFunction, GridFunctionFile};
pub use grid::{Grid, Quadrature, DEFAULT_SUBINTERVALS};
