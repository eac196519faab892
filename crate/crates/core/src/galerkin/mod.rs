//! Faedo-Galerkin time stepping: the velocity space X_N, the mass operator
//! 𝔐[ρ], the regularized continuity solve and the Picard advance of the
//! coupled system.

mod basis;
mod mass;
mod run;
mod step;

pub use basis::{ordered_modes, BasisMode, GalerkinBasis, Trig};
pub use mass::{lipschitz_check, MassMatrix};
pub use run::{diagnose, initial_state, run, run_with, RunOutcome, Snapshot, Trajectory};
pub use step::WeakTerms;
pub use step::{continuity_step, fixed_point_advance, momentum_rhs, momentum_strong, Advance, State};
