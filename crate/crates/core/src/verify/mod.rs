//! Numerical checks of the identities satisfied by `H_α`, its eigenfunctions
//! and the metric, plus the suite that runs them and reports the results.

pub mod checks;
pub mod family;
pub mod report;
pub mod suite;

pub use checks::{
    biorthonormality_matrix, cosine_partial_sum, domain_mapping_residual, expansion_residual,
    form_consistency_residual, gauge_transform_residual, metric_boundary, norm_difference_check,
    norm_difference_formula, parseval_check, parseval_partial_sums, phi0_projection_identity,
    quasi_hermiticity_residual, relative_bound_check, robin_residual, sesquilinear_form, Basis, Biorthonormality,
    Expansion, ExpansionCoefficients, GaugeResiduals, MetricBoundary, RelativeBound, DOMAIN_TOLERANCE,
};
pub use family::{hand_built, random_band_limited, random_eigen_combination, robin_compatible, ModeTable};
pub use report::{CheckParams, CheckRecord, CheckStatus, ReportSummary, VerificationReport};
pub use suite::{run_all, Suite, SuiteOptions, Tolerances, DEFAULT_SEED};
