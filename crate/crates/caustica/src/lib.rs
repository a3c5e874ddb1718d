//! Numerical joint spectra and spectral-projector sums for the unit disk
//! and simple surfaces of revolution.
//!
//! The library builds the joint spectrum (frequency, angular momentum) of
//! the Dirichlet disk and of revolution surfaces, extracts thin frequency
//! bands of width λ^{-1/3}, evaluates weighted eigenfunction sums over
//! spatial regions, and measures how the sup of those sums scales with λ.
//! Side checks cover the band lattice structure (per-n uniqueness), caustic
//! spacing, Airy envelope bounds, and the large-order Bessel zero
//! asymptotics that feed the boundary analysis.

mod dd;
pub mod bands;
pub mod cli;
pub mod config;
pub mod disk;
pub mod error;
pub mod norms;
pub mod quad;
pub mod report;
pub mod revolution;
pub mod specfun;
pub mod sweep;
pub mod tolerances;

pub use error::{Error, Result};
