//! Discrete energy and BD entropy balances along a run.
//!
//! cargo run --release --example energy_balance

use qns_core::diagnostics::parse_config;
use qns_core::functionals::bd_entropy;
use qns_core::galerkin;

fn main() -> qns_core::Result<()> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/near_vacuum.json"))?;
    let cfg = parse_config(&text)?;
    let traj = galerkin::run(&cfg)?;

    let first = &traj.records[0];
    let last = traj.records.last().expect("at least the initial record");
    println!("E(0) = {:.8}   E(T) = {:.8}", first.energy.total, last.energy.total);
    println!("balance defect E(T) − E(0) + ∫D = {:.3e}", traj.energy_balance_defect());
    println!("largest one-step increase: {:.3e}", traj.max_energy_increase());
    println!("final dissipation rates:");
    for (k, v) in &last.dissipation {
        println!("  {k:<12} {v:.4e}");
    }

    let snap = traj.snapshots.last().expect("final snapshot");
    let bd = bd_entropy(&snap.rho, &snap.velocity(&traj.basis), &cfg.params)?;
    println!("BD entropy at T: {:.6} (log term {:.6})", bd.total(), bd.log_term);
    for (i, r) in bd.remainders.iter().enumerate() {
        println!("  R{} = {r:+.4e}", i + 1);
    }
    Ok(())
}
