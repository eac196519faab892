use std::f64::consts::SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{self, PeriodicGrid, ScalarField, VectorField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trig {
    Constant,
    Cos,
    Sin,
}

/// One vector mode φ(x) ê_c with φ ∈ {1, cos k·x, sin k·x}, L²-normalized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BasisMode {
    pub component: usize,
    pub mode: [i64; 3],
    pub kind: Trig,
}

impl BasisMode {
    pub fn mode_squared(&self) -> i64 {
        self.mode.iter().map(|m| m * m).sum()
    }
}

/// Orthonormal trigonometric basis of X_N.
#[derive(Debug, Clone)]
pub struct GalerkinBasis {
    grid: PeriodicGrid,
    modes: Vec<BasisMode>,
    /// φ_i sampled at the nodes.
    profiles: Vec<ScalarField>,
    /// ∇φ_i, evaluated analytically.
    gradients: Vec<VectorField>,
    /// |k_i|² so that Δe_i = −|k_i|² e_i.
    k2: Vec<f64>,
}

fn in_half_space(m: &[i64]) -> bool {
    match m.iter().find(|&&x| x != 0) {
        Some(&x) => x > 0,
        None => false,
    }
}

/// All admissible vector modes on `grid`, in basis order.
pub fn ordered_modes(grid: &PeriodicGrid) -> Vec<BasisMode> {
    let d = grid.dim();
    let kc = grid.dealias_cutoff();
    let mut ks: Vec<[i64; 3]> = vec![[0; 3]];
    let span = 2 * kc + 1;
    let total = (span as usize).pow(d as u32);
    for flat in 0..total {
        let mut m = [0i64; 3];
        let mut r = flat as i64;
        for a in (0..d).rev() {
            m[a] = r % span - kc;
            r /= span;
        }
        if in_half_space(&m[..d]) {
            ks.push(m);
        }
    }
    let mut modes = Vec::new();
    for c in 0..d {
        for m in &ks {
            if m.iter().all(|&x| x == 0) {
                modes.push(BasisMode {
                    component: c,
                    mode: *m,
                    kind: Trig::Constant,
                });
            } else {
                for kind in [Trig::Cos, Trig::Sin] {
                    modes.push(BasisMode {
                        component: c,
                        mode: *m,
                        kind,
                    });
                }
            }
        }
    }
    modes.sort_by(|a, b| {
        (a.mode_squared(), a.component, a.mode, a.kind).cmp(&(
            b.mode_squared(),
            b.component,
            b.mode,
            b.kind,
        ))
    });
    modes
}

impl GalerkinBasis {
    pub fn new(grid: PeriodicGrid, n_modes: usize) -> Result<Self> {
        if n_modes == 0 {
            return Err(Error::InvalidArgument("basis needs at least one mode".into()));
        }
        let all = ordered_modes(&grid);
        if n_modes > all.len() {
            return Err(Error::BasisTooLarge {
                requested: n_modes,
                available: all.len(),
            });
        }
        let modes: Vec<BasisMode> = all.into_iter().take(n_modes).collect();
        let vol = grid.volume();
        let k0 = grid.k0();
        let d = grid.dim();
        let mut profiles = Vec::with_capacity(n_modes);
        let mut gradients = Vec::with_capacity(n_modes);
        let mut k2 = Vec::with_capacity(n_modes);
        for bm in &modes {
            let kv: Vec<f64> = (0..d).map(|a| bm.mode[a] as f64 * k0).collect();
            let amp = match bm.kind {
                Trig::Constant => 1.0 / vol.sqrt(),
                _ => SQRT_2 / vol.sqrt(),
            };
            let phase = |x: &[f64]| kv.iter().zip(x).map(|(k, xi)| k * xi).sum::<f64>();
            let kind = bm.kind;
            let profile = ScalarField::from_fn(grid, |x| match kind {
                Trig::Constant => amp,
                Trig::Cos => amp * phase(x).cos(),
                Trig::Sin => amp * phase(x).sin(),
            });
            let grad = VectorField::from_fn(grid, |x, a| match kind {
                Trig::Constant => 0.0,
                Trig::Cos => -amp * kv[a] * phase(x).sin(),
                Trig::Sin => amp * kv[a] * phase(x).cos(),
            });
            k2.push(kv.iter().map(|k| k * k).sum());
            profiles.push(profile);
            gradients.push(grad);
        }
        Ok(Self {
            grid,
            modes,
            profiles,
            gradients,
            k2,
        })
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn modes(&self) -> &[BasisMode] {
        &self.modes
    }

    pub fn profile(&self, i: usize) -> &ScalarField {
        &self.profiles[i]
    }

    pub fn profile_gradient(&self, i: usize) -> &VectorField {
        &self.gradients[i]
    }

    pub fn k_squared(&self, i: usize) -> f64 {
        self.k2[i]
    }

    /// Largest |m| on any axis among the modes.
    pub fn max_mode(&self) -> i64 {
        self.modes
            .iter()
            .flat_map(|m| m.mode.iter().map(|x| x.abs()))
            .max()
            .unwrap_or(0)
    }

    /// e_i as a vector field.
    pub fn mode_field(&self, i: usize) -> VectorField {
        let c = self.modes[i].component;
        VectorField::from_components(
            (0..self.grid.dim())
                .map(|a| {
                    if a == c {
                        self.profiles[i].clone()
                    } else {
                        ScalarField::zeros(self.grid)
                    }
                })
                .collect(),
        )
    }

    /// u = Σ λ_i e_i.
    pub fn reconstruct(&self, lambda: &[f64]) -> VectorField {
        let d = self.grid.dim();
        let len = self.grid.len();
        let mut comps = vec![vec![0.0; len]; d];
        for (i, &l) in lambda.iter().enumerate() {
            if l == 0.0 {
                continue;
            }
            let c = self.modes[i].component;
            for (o, v) in comps[c].iter_mut().zip(self.profiles[i].values()) {
                *o += l * v;
            }
        }
        VectorField::from_components(
            comps
                .into_iter()
                .map(|v| ScalarField::from_vec(self.grid, v))
                .collect(),
        )
    }

    /// L² projection coefficients ⟨v, e_i⟩.
    pub fn project(&self, v: &VectorField) -> Vec<f64> {
        (0..self.len())
            .map(|i| spectral::inner(v.component(self.modes[i].component), &self.profiles[i]))
            .collect()
    }

    /// ∫ v·e_i for every i.
    pub fn pair(&self, v: &VectorField) -> Vec<f64> {
        self.project(v)
    }

    /// ∫ A:∇e_i for a d×d row-major tensor field A.
    pub fn pair_tensor(&self, a: &[ScalarField]) -> Vec<f64> {
        let d = self.grid.dim();
        (0..self.len())
            .map(|i| {
                let c = self.modes[i].component;
                (0..d)
                    .map(|j| spectral::inner(&a[c * d + j], self.gradients[i].component(j)))
                    .sum()
            })
            .collect()
    }

    /// ∫ p div e_i for a scalar field p.
    pub fn pair_divergence(&self, p: &ScalarField) -> Vec<f64> {
        (0..self.len())
            .map(|i| {
                let c = self.modes[i].component;
                spectral::inner(p, self.gradients[i].component(c))
            })
            .collect()
    }

    /// Gram matrix ⟨e_i, e_j⟩ computed by nodal quadrature.
    pub fn gram(&self) -> Vec<Vec<f64>> {
        let n = self.len();
        let mut g = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                if self.modes[i].component == self.modes[j].component {
                    g[i][j] = spectral::inner(&self.profiles[i], &self.profiles[j]);
                }
            }
        }
        g
    }
}
