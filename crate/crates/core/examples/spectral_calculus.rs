//! Transforms, derivatives and the dealiased product on a 2-torus.
//!
//! cargo run --example spectral_calculus

use qns_core::spectral::{self, PeriodicGrid, ScalarField};

fn main() -> qns_core::Result<()> {
    let grid = PeriodicGrid::with_default_length(2, 32)?;
    let f = ScalarField::from_fn(grid, |x| (x[0]).sin() * (2.0 * x[1]).cos());

    let c = spectral::forward(&f)?;
    println!("coefficient at (1, 2): {:.6}", c.get(&[1, 2]));
    println!("round trip error: {:.2e}", {
        let back = spectral::inverse(&c)?;
        back.values().iter().zip(f.values()).fold(0.0f64, |m, (a, b)| m.max((a - b).abs()))
    });

    // Δf = −5f for this mode
    let lap = spectral::laplacian(&f);
    let err = lap
        .values()
        .iter()
        .zip(f.values())
        .fold(0.0f64, |m, (l, v)| m.max((l + 5.0 * v).abs()));
    println!("|Δf + 5f|_∞ = {err:.2e}");

    let dx = spectral::derivative(&f, 0, 1)?;
    println!("∫∂₀f = {:.2e}", spectral::integrate(&dx));

    // products are truncated to 3|k| < n, so sin(10x)² loses its k = 20 part
    let g = ScalarField::from_fn(grid, |x| (10.0 * x[0]).sin());
    let p = spectral::product(&g, &g);
    println!(
        "dealiased sin²(10x): mean {:.4}, max {:.4} (exact max 1)",
        p.mean(),
        p.max()
    );
    println!("dealias cutoff on n = 32: |k| ≤ {}", grid.dealias_cutoff());
    Ok(())
}
