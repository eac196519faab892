//! The two forms of the Bohm force and the integration-by-parts identity
//! behind the quantum dissipation.
//!
//! cargo run --example bohm_identities

use qns_core::functionals::{bohm_force_divform, bohm_force_strong, bohm_potential, ibp_identity_residual};
use qns_core::spectral::{self, PeriodicGrid, ScalarField};

fn main() -> qns_core::Result<()> {
    let grid = PeriodicGrid::with_default_length(2, 64)?;
    let rho = ScalarField::from_fn(grid, |x| {
        1.0 + 0.4 * x[0].sin() * x[1].cos() + 0.2 * (2.0 * x[1]).sin()
    });

    let q = bohm_potential(&rho)?;
    println!("Bohm potential range: [{:.4}, {:.4}]", q.min(), q.max());

    let strong = bohm_force_strong(&rho, 1.0)?;
    let div = bohm_force_divform(&rho, 1.0)?;
    let diff = strong.sub(&div);
    let rel = (spectral::inner_vec(&diff, &diff) / spectral::inner_vec(&strong, &strong)).sqrt();
    println!("ρ∇(Δ√ρ/√ρ) against ½div(ρ∇²log ρ): relative L² gap {rel:.2e}");

    println!("integration by parts residual: {:.2e}", ibp_identity_residual(&rho)?);
    Ok(())
}
