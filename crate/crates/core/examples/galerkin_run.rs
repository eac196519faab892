//! Integrate a shipped config and print a coarse trajectory table.
//!
//! cargo run --release --example galerkin_run [config.json]

use qns_core::diagnostics::parse_config;
use qns_core::galerkin;

fn main() -> qns_core::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/standard.json").into());
    let cfg = parse_config(&std::fs::read_to_string(&path)?)?;
    let traj = galerkin::run(&cfg)?;

    println!("{:>6} {:>8} {:>14} {:>14} {:>10} {:>5}", "step", "t", "energy", "mass", "min ρ", "iter");
    let stride = (traj.records.len() / 10).max(1);
    for r in traj.records.iter().step_by(stride) {
        println!(
            "{:>6} {:>8.4} {:>14.10} {:>14.10} {:>10.4} {:>5}",
            r.step, r.time, r.energy.total, r.mass, r.min_rho, r.picard_iterations
        );
    }
    println!("outcome: {:?}", traj.outcome);
    println!("u₀ projection defect: {:.3e}", traj.initial_projection_defect);
    Ok(())
}
