//! κ → 0 against the κ = 0 run, with the κ-weighted bounds.
//!
//! cargo run --release --example kappa_limit

use qns_core::cascade::{kappa_limit_study, uniformly_bounded};
use qns_core::diagnostics::{parse_config, sweep_csv};

fn main() -> qns_core::Result<()> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/standard.json"))?;
    let mut cfg = parse_config(&text)?;
    cfg.t_final = 0.2;

    let table = kappa_limit_study(&cfg, &[1e-1, 3e-2, 1e-2, 3e-3, 1e-3])?;
    print!("{}", sweep_csv(&table)?);
    let h2 = table.metric_values("kappa_h2")?;
    let l4 = table.metric_values("kappa_l4")?;
    println!("H² bound uniform: {}", uniformly_bounded(&h2));
    println!("L⁴ bound uniform: {}", uniformly_bounded(&l4));
    Ok(())
}
