//! Sampling certifiers for the estimates behind the construction, boundary
//! quadrature against a residue oracle, sup-norm estimates on `X` and
//! regularity witnesses.

pub mod bounds;
pub mod convergence;
pub mod quadrature;
pub mod report;
pub mod sampling;
pub mod suites;
pub mod supnorm;
pub mod witness;

pub use bounds::{check_h_bounds, check_level_family};
pub use convergence::{check_convergence, check_convergence_at, check_nonvanishing, k_interval};
pub use quadrature::{
    contour_integral_boundary, integrate_boundary, residue_oracle, residues, QuadratureResult, DEFAULT_TOLERANCE,
};
pub use report::{CertReport, Verdict};
pub use sampling::{Region, SamplePlan};
pub use suites::{
    check_budget, check_derivation, check_residue_oracle, derivation_pole, random_rational_pair,
};
pub use supnorm::{check_derivation_bound, sup_norm_estimate, DiscIndex, SupEstimate};
pub use witness::{regularity_witness, Witness};

/// Default number of samples per circle, edge or region.
pub const DEFAULT_SAMPLES: usize = 4096;
