//! Spectrum of `H_α` and of the two-parameter generalization.

mod eigen;
mod export;
mod params;
mod roots;

pub(crate) use eigen::phi_unchecked;
pub use eigen::{
    chi_dirichlet, chi_neumann, eigenvalue, phi_eigenfunction, psi_eigenfunction, sinc, spectral_pair, SpectralPair,
};
pub use export::{closed_form_rows, root_rows, write_csv, write_json, SpectrumRow};
pub(crate) use params::degeneracy_of;
pub use params::{check_nondegenerate, DegeneracyFlag, ModelParams, DEGENERACY_TOLERANCE};
pub use roots::{
    characteristic, characteristic_derivative, eigen_residual, general_eigenvalues, has_zero_mode, CountAudit,
    GeneralSpectrum, RootKind, SpectralRoot, MAX_NEWTON_ITERATIONS, POLISH_TOLERANCE,
};
