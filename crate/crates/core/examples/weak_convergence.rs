//! Weak momentum residual under dt and Galerkin refinement.
//!
//! cargo run --release --example weak_convergence

use qns_core::cascade::{dt_refinement, mode_refinement};
use qns_core::diagnostics::{parse_config, sweep_csv};

fn main() -> qns_core::Result<()> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/weak_form.json"))?;
    let mut cfg = parse_config(&text)?;
    cfg.t_final = 0.1;

    print!("{}", sweep_csv(&dt_refinement(&cfg, &[4e-3, 2e-3, 1e-3])?)?);
    println!();
    print!("{}", sweep_csv(&mode_refinement(&cfg, &[4, 8, 16])?)?);
    Ok(())
}
