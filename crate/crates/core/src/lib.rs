//! Pseudo-spectral Faedo-Galerkin solver for the regularized barotropic
//! quantum Navier-Stokes system with drag on the periodic torus, together with
//! the functionals, identity checks and parameter sweeps used to test its
//! energy and entropy estimates.

pub mod cascade;
pub mod cli;
pub mod diagnostics;
pub mod error;
pub mod functionals;
pub mod galerkin;
pub mod profiles;
pub mod spectral;

pub use error::{Error, Result};
pub use functionals::ModelParams;
pub use spectral::{PeriodicGrid, ScalarField, SpectralCoeffs, VectorField};
