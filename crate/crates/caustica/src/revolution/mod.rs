//! Simple metrics of revolution on the sphere: profile validation, the
//! radial eigensolver, caustics, and the action-curve genericity check.

mod action;
mod profile;
mod solver;
pub mod tridiag;

pub use action::{
    action_integral, genericity_check, ActionCurve, GenericityReport, GenericityVerdict,
    InflectionPoint,
};
pub use profile::{
    validate_profile, ProfileFn, RevolutionProfile, TableProfile, ValidationClause,
    ValidationReport,
};
pub use solver::{
    radial_spectrum, rev_band_spectrum, rev_eigenfunction_sq, RevBand, RevSpectrum,
    RevolutionMode, SGrid, SolverOptions,
};
