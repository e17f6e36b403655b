//! Test functions used by the suite.

use num_complex::Complex64;
use rand::Rng;

use crate::domain::{AnalyticTestFunction, Grid, GridFunction};
use crate::error::Result;
use crate::spectrum::{psi_eigenfunction, ModelParams};
use crate::I;

/// Adds `a·x² + b·x` to `base` so that the result satisfies the Robin
/// conditions `ψ' + iαψ = 0` at both ends.
pub fn robin_compatible(base: &AnalyticTestFunction, alpha: f64, d: f64) -> AnalyticTestFunction {
    let bv = base.boundary_values(d);
    let left = bv.left_slope + I * alpha * bv.left;
    let right = bv.right_slope + I * alpha * bv.right;
    // x contributes (1, 1 + iαd), x² contributes (0, 2d + iαd²)
    let b = -left;
    let a = -(right + b * (1.0 + I * alpha * d)) / (2.0 * d + I * alpha * d * d);
    base.plus(&AnalyticTestFunction::poly([Complex64::new(0.0, 0.0), b, a]))
}

/// Three Robin-compatible functions built from exponentials and trig terms.
pub fn hand_built(alpha: f64, d: f64) -> Vec<AnalyticTestFunction> {
    let re = |x: f64| Complex64::new(x, 0.0);
    let bases = [
        AnalyticTestFunction::cos(re(1.0), 2.5 / d)
            .plus(&AnalyticTestFunction::sin(Complex64::new(0.3, -0.4), 7.0 / d)),
        AnalyticTestFunction::exp(re(1.0), Complex64::new(0.5 / d, 3.0 / d)),
        AnalyticTestFunction::sin(I, 11.3 / d).plus(&AnalyticTestFunction::constant(re(0.7))),
    ];
    bases.iter().map(|b| robin_compatible(b, alpha, d)).collect()
}

fn random_complex<R: Rng>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

/// `Σ_{j ≤ j_max} c_jψ_j` with uniformly random complex `c_j`.
pub fn random_eigen_combination<R: Rng>(
    params: &ModelParams,
    j_max: usize,
    rng: &mut R,
) -> Result<AnalyticTestFunction> {
    let mut f = AnalyticTestFunction::zero();
    for j in 0..=j_max {
        f = f.scaled_plus(random_complex(rng), &psi_eigenfunction(j, params)?);
    }
    Ok(f)
}

/// Samples of `cos(k_j x)` (`j ≤ modes`) and `sin(k_j x)` (`1 ≤ j ≤ modes`)
/// on a grid, reused to draw many band-limited functions cheaply.
#[derive(Debug, Clone)]
pub struct ModeTable {
    grid: Grid,
    modes: Vec<Vec<f64>>,
}

impl ModeTable {
    pub fn new(grid: &Grid, modes: usize) -> Self {
        let d = grid.d();
        let mut table = Vec::with_capacity(2 * modes + 1);
        for j in 0..=modes {
            let k = j as f64 * std::f64::consts::PI / d;
            table.push(grid.nodes().map(|x| (k * x).cos()).collect());
            if j >= 1 {
                table.push(grid.nodes().map(|x| (k * x).sin()).collect());
            }
        }
        ModeTable { grid: grid.clone(), modes: table }
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Random combination with coefficients decaying like `1/(1 + j)`.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> GridFunction {
        let mut values = vec![Complex64::new(0.0, 0.0); self.grid.len()];
        for (idx, mode) in self.modes.iter().enumerate() {
            let j = idx.div_ceil(2);
            let c = random_complex(rng) / (1.0 + j as f64);
            for (v, m) in values.iter_mut().zip(mode) {
                *v += c * m;
            }
        }
        GridFunction::new(self.grid.clone(), values).expect("finite samples on the table grid")
    }
}

/// Single random band-limited function with Neumann and Dirichlet modes up
/// to `modes`.
pub fn random_band_limited<R: Rng>(grid: &Grid, modes: usize, rng: &mut R) -> GridFunction {
    ModeTable::new(grid, modes).sample(rng)
}
