//! Named initial-data profiles.
//!
//! Densities are sampled, projected onto the dealiased subspace and lifted by
//! a constant when their minimum falls below the configured ν. Velocities are
//! L²-projected onto X_N; the projection defect is returned so callers can
//! record how much of the configured field the basis could not represent.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::galerkin::GalerkinBasis;
use crate::spectral::{self, PeriodicGrid, ScalarField, VectorField};

fn one() -> f64 {
    1.0
}

fn two() -> f64 {
    2.0
}

fn three() -> i64 {
    3
}

/// a cos(k·x) + b sin(k·x).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FourierTerm {
    pub mode: Vec<i64>,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

/// A Fourier term placed in one vector component.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VectorTerm {
    pub component: usize,
    pub mode: Vec<i64>,
    #[serde(default)]
    pub cos: f64,
    #[serde(default)]
    pub sin: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Wave {
    #[default]
    Cos,
    Sin,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case", deny_unknown_fields)]
pub enum DensityProfile {
    Constant {
        value: f64,
    },
    /// base + a sin(k·x)
    SingleMode {
        #[serde(default = "one")]
        base: f64,
        amplitude: f64,
        mode: Vec<i64>,
    },
    /// base + seeded random trigonometric polynomial with Σ|coefficients| = amplitude.
    MultiModeRandom {
        #[serde(default = "one")]
        base: f64,
        amplitude: f64,
        #[serde(default = "three")]
        max_mode: i64,
    },
    /// ν + a(1 + cos x₀)^p
    NearVacuum {
        amplitude: f64,
        #[serde(default = "two")]
        power: f64,
    },
    Coefficients {
        #[serde(default = "one")]
        base: f64,
        terms: Vec<FourierTerm>,
    },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "profile", rename_all = "snake_case", deny_unknown_fields)]
pub enum VelocityProfile {
    #[default]
    Zero,
    /// a·wave(k·x) ê_component
    SingleMode {
        amplitude: f64,
        mode: Vec<i64>,
        #[serde(default)]
        component: usize,
        #[serde(default)]
        wave: Wave,
    },
    /// Galerkin coefficients λ directly.
    Coefficients {
        lambda: Vec<f64>,
    },
    /// Initial momentum m₀; the velocity is m₀/ρ₀ projected onto X_N.
    Momentum {
        terms: Vec<VectorTerm>,
    },
}


fn check_mode(grid: &PeriodicGrid, mode: &[i64], path: &str) -> Result<()> {
    if mode.len() != grid.dim() {
        return Err(Error::InvalidArgument(format!(
            "{path}: mode has {} entries, grid has dimension {}",
            mode.len(),
            grid.dim()
        )));
    }
    if let Some(m) = mode.iter().find(|&&m| !grid.keeps_mode(m)) {
        return Err(Error::InvalidArgument(format!(
            "{path}: mode {m} lies outside the dealiased range |m| <= {}",
            grid.dealias_cutoff()
        )));
    }
    Ok(())
}

fn phase(grid: &PeriodicGrid, mode: &[i64], x: &[f64]) -> f64 {
    let k0 = grid.k0();
    mode.iter().zip(x).map(|(&m, xi)| m as f64 * k0 * xi).sum()
}

fn finite(v: f64, what: &str) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("{what} must be finite")))
    }
}

/// Seeded random positive density: base + Σ a_k cos(k·x) + b_k sin(k·x) over
/// modes with max |m| ≤ max_mode, scaled so that Σ(|a_k| + |b_k|) = amplitude.
pub fn random_density(
    grid: &PeriodicGrid,
    rng: &mut impl Rng,
    base: f64,
    amplitude: f64,
    max_mode: i64,
) -> ScalarField {
    let d = grid.dim();
    let span = 2 * max_mode + 1;
    let mut terms = Vec::new();
    for flat in 0..(span as usize).pow(d as u32) {
        let mut m = vec![0i64; d];
        let mut r = flat as i64;
        for a in (0..d).rev() {
            m[a] = r % span - max_mode;
            r /= span;
        }
        match m.iter().find(|&&x| x != 0) {
            Some(&x) if x > 0 => {}
            _ => continue,
        }
        let a: f64 = rng.gen_range(-1.0..1.0);
        let b: f64 = rng.gen_range(-1.0..1.0);
        terms.push((m, a, b));
    }
    let total: f64 = terms.iter().map(|(_, a, b)| a.abs() + b.abs()).sum();
    let s = if total > 0.0 { amplitude / total } else { 0.0 };
    ScalarField::from_fn(*grid, |x| {
        base + terms
            .iter()
            .map(|(m, a, b)| {
                let ph = phase(grid, m, x);
                s * (a * ph.cos() + b * ph.sin())
            })
            .sum::<f64>()
    })
}

impl DensityProfile {
    /// Sampled profile before projection and lifting.
    pub fn sample(&self, grid: &PeriodicGrid, nu: f64, seed: u64) -> Result<ScalarField> {
        Ok(match self {
            DensityProfile::Constant { value } => {
                finite(*value, "value")?;
                ScalarField::constant(*grid, *value)
            }
            DensityProfile::SingleMode {
                base,
                amplitude,
                mode,
            } => {
                finite(*base, "base")?;
                finite(*amplitude, "amplitude")?;
                check_mode(grid, mode, "mode")?;
                ScalarField::from_fn(*grid, |x| base + amplitude * phase(grid, mode, x).sin())
            }
            DensityProfile::MultiModeRandom {
                base,
                amplitude,
                max_mode,
            } => {
                finite(*base, "base")?;
                finite(*amplitude, "amplitude")?;
                if *max_mode < 1 || !grid.keeps_mode(*max_mode) {
                    return Err(Error::InvalidArgument(format!(
                        "max_mode must lie in 1..={}",
                        grid.dealias_cutoff()
                    )));
                }
                let mut rng = ChaCha8Rng::seed_from_u64(seed);
                random_density(grid, &mut rng, *base, *amplitude, *max_mode)
            }
            DensityProfile::NearVacuum { amplitude, power } => {
                finite(*amplitude, "amplitude")?;
                finite(*power, "power")?;
                if *amplitude < 0.0 || *power < 0.0 {
                    return Err(Error::InvalidArgument(
                        "near_vacuum amplitude and power must be >= 0".into(),
                    ));
                }
                let k0 = grid.k0();
                ScalarField::from_fn(*grid, |x| nu + amplitude * (1.0 + (k0 * x[0]).cos()).powf(*power))
            }
            DensityProfile::Coefficients { base, terms } => {
                finite(*base, "base")?;
                for (i, t) in terms.iter().enumerate() {
                    check_mode(grid, &t.mode, &format!("terms[{i}].mode"))?;
                    finite(t.cos, "cos")?;
                    finite(t.sin, "sin")?;
                }
                ScalarField::from_fn(*grid, |x| {
                    base + terms
                        .iter()
                        .map(|t| {
                            let ph = phase(grid, &t.mode, x);
                            t.cos * ph.cos() + t.sin * ph.sin()
                        })
                        .sum::<f64>()
                })
            }
        })
    }

    /// Projected and lifted ρ₀ ≥ ν.
    pub fn build(&self, grid: &PeriodicGrid, nu: f64, seed: u64) -> Result<ScalarField> {
        let rho = spectral::project(&self.sample(grid, nu, seed)?);
        let min = rho.min();
        Ok(if min < nu {
            rho.map(|r| r + (nu - min))
        } else {
            rho
        })
    }
}

impl VelocityProfile {
    /// Galerkin coefficients of u₀ and the L² norm of what the projection dropped.
    pub fn build(&self, basis: &GalerkinBasis, rho0: &ScalarField) -> Result<(Vec<f64>, f64)> {
        let grid = *basis.grid();
        let field = match self {
            VelocityProfile::Zero => return Ok((vec![0.0; basis.len()], 0.0)),
            VelocityProfile::Coefficients { lambda } => {
                if lambda.len() != basis.len() {
                    return Err(Error::InvalidArgument(format!(
                        "lambda has {} entries, basis has {}",
                        lambda.len(),
                        basis.len()
                    )));
                }
                if lambda.iter().any(|v| !v.is_finite()) {
                    return Err(Error::InvalidArgument("lambda must be finite".into()));
                }
                return Ok((lambda.clone(), 0.0));
            }
            VelocityProfile::SingleMode {
                amplitude,
                mode,
                component,
                wave,
            } => {
                finite(*amplitude, "amplitude")?;
                check_mode(&grid, mode, "mode")?;
                if *component >= grid.dim() {
                    return Err(Error::AxisOutOfRange {
                        axis: *component,
                        dim: grid.dim(),
                    });
                }
                VectorField::from_fn(grid, |x, c| {
                    if c != *component {
                        return 0.0;
                    }
                    let ph = phase(&grid, mode, x);
                    amplitude
                        * match wave {
                            Wave::Cos => ph.cos(),
                            Wave::Sin => ph.sin(),
                        }
                })
            }
            VelocityProfile::Momentum { terms } => {
                for (i, t) in terms.iter().enumerate() {
                    check_mode(&grid, &t.mode, &format!("terms[{i}].mode"))?;
                    if t.component >= grid.dim() {
                        return Err(Error::AxisOutOfRange {
                            axis: t.component,
                            dim: grid.dim(),
                        });
                    }
                }
                let m = VectorField::from_fn(grid, |x, c| {
                    terms
                        .iter()
                        .filter(|t| t.component == c)
                        .map(|t| {
                            let ph = phase(&grid, &t.mode, x);
                            t.cos * ph.cos() + t.sin * ph.sin()
                        })
                        .sum()
                });
                m.scale_by(&rho0.map(|r| 1.0 / r))
            }
        };
        let lambda = basis.project(&field);
        let rest = field.sub(&basis.reconstruct(&lambda));
        let defect = spectral::inner_vec(&rest, &rest).sqrt();
        Ok((lambda, defect))
    }
}
