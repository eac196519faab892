//! The seeded inequality and identity battery, as run by `qns verify`.
//!
//! cargo run --release --example jungel_inequalities [fields] [seed]

use qns_core::diagnostics::verify_battery;
use qns_core::functionals::jungel_terms;
use qns_core::spectral::{PeriodicGrid, ScalarField};

fn main() -> qns_core::Result<()> {
    let mut args = std::env::args().skip(1);
    let fields: usize = args.next().and_then(|a| a.parse().ok()).unwrap_or(20);
    let seed: u64 = args.next().and_then(|a| a.parse().ok()).unwrap_or(7);

    // one field by hand
    let grid = PeriodicGrid::with_default_length(1, 128)?;
    let rho = ScalarField::from_fn(grid, |x| (0.8 * x[0].cos()).exp());
    let t = jungel_terms(&rho)?;
    println!("D = {:.5}  A/7 = {:.5}  B/8 = {:.5}", t.d, t.a / 7.0, t.b / 8.0);

    let report = verify_battery(fields, seed)?;
    for c in &report.checks {
        println!(
            "{:<20} {}  worst {:+.3e} (limit {:.0e}, {})",
            c.name,
            if c.passed { "ok  " } else { "FAIL" },
            c.worst,
            c.threshold,
            c.worst_field
        );
    }
    Ok(())
}
