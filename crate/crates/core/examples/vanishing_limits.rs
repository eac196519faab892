//! The η, δ and ε = μ sweeps on a shortened standard config.
//!
//! cargo run --release --example vanishing_limits

use qns_core::cascade::{delta_sweep, epsilon_mu_sweep, eta_sweep};
use qns_core::diagnostics::{parse_config, sweep_csv};

fn main() -> qns_core::Result<()> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/standard.json"))?;
    let mut cfg = parse_config(&text)?;
    cfg.t_final = 0.1;

    print!("{}", sweep_csv(&eta_sweep(&cfg, &[1e-2, 1e-3, 1e-4, 1e-5])?)?);
    println!();
    print!("{}", sweep_csv(&delta_sweep(&cfg, &[1e-4, 1e-5, 1e-6, 1e-7])?)?);
    println!();
    print!("{}", sweep_csv(&epsilon_mu_sweep(&cfg, &[1e-2, 1e-3, 1e-4])?)?);
    Ok(())
}
