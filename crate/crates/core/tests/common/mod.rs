//! Independent oracles. Nothing here calls into the crate's transforms or
//! functionals; fields are sampled from closed forms and integrals are
//! brute-force quadrature.
#![allow(dead_code)]

use std::f64::consts::PI;

use qns_core::{PeriodicGrid, ScalarField, VectorField};

pub const TWO_PI: f64 = 2.0 * PI;

/// 10⁶-point composite rule on one period of a periodic integrand.
pub fn quad(f: impl Fn(f64) -> f64) -> f64 {
    quad_n(f, 1_000_000)
}

pub fn quad_n(f: impl Fn(f64) -> f64, n: usize) -> f64 {
    let h = TWO_PI / n as f64;
    (0..n).map(|i| f(i as f64 * h)).sum::<f64>() * h
}

/// O(n²) discrete transform with the 1/n normalization: (re, im) per index.
pub fn dft(values: &[f64]) -> Vec<(f64, f64)> {
    let n = values.len();
    (0..n)
        .map(|k| {
            let mut re = 0.0;
            let mut im = 0.0;
            for (j, v) in values.iter().enumerate() {
                let a = -TWO_PI * (k * j) as f64 / n as f64;
                re += v * a.cos();
                im += v * a.sin();
            }
            (re / n as f64, im / n as f64)
        })
        .collect()
}

pub fn grid1(n: usize) -> PeriodicGrid {
    PeriodicGrid::with_default_length(1, n).unwrap()
}

pub fn grid2(n: usize) -> PeriodicGrid {
    PeriodicGrid::with_default_length(2, n).unwrap()
}

/// Scalar field depending on x₀ only.
pub fn field_x(grid: PeriodicGrid, f: impl Fn(f64) -> f64) -> ScalarField {
    ScalarField::from_fn(grid, |x| f(x[0]))
}

/// Vector field whose component 0 is `f(x₀)` and the rest zero.
pub fn vector_x(grid: PeriodicGrid, f: impl Fn(f64) -> f64) -> VectorField {
    VectorField::from_fn(grid, |x, c| if c == 0 { f(x[0]) } else { 0.0 })
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// |a − b| ≤ tol · max(1, |b|)
pub fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1.0)
}

#[track_caller]
pub fn assert_close(a: f64, b: f64, tol: f64) {
    assert!(close(a, b, tol), "{a:e} vs {b:e} (tol {tol:e}, diff {:e})", (a - b).abs());
}

/// Seeded band-limited positive density 1 + Σ small trigonometric terms.
pub fn smooth_density(grid: PeriodicGrid, seed: u64) -> ScalarField {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let amp: f64 = rng.gen_range(0.1..0.6);
    qns_core::profiles::random_density(&grid, &mut rng, 1.0, amp, 3)
}

/// A config shipped under `configs/`.
pub fn shipped(name: &str) -> qns_core::diagnostics::RunConfig {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(format!("{name}.json"));
    qns_core::diagnostics::parse_config(&std::fs::read_to_string(path).unwrap()).unwrap()
}
