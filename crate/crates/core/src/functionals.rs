//! Energy, BD entropy, Bohm force and the Jüngel-type integrals.
//!
//! Pointwise compositions (√ρ, log ρ, ρ^γ, ρ⁻¹⁰) are evaluated at the nodes.
//! Whenever such a composition is differentiated it is first re-projected
//! onto the dealiased subspace. All functionals reject densities that are not
//! strictly positive; [`sqrt_density`] is the only floored evaluation.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{
    self, gradient, hessian, integrate, laplacian, project, ScalarField, VectorField,
};

/// Exponent of the cold-pressure stabilizer ρ⁻¹⁰.
pub const COLD_EXPONENT: i32 = 10;
/// Power of Δ in the hyper-regularization force δρ∇Δ⁹ρ.
pub const HYPER_POWER: u32 = 9;

fn default_floor() -> f64 {
    1e-8
}

/// Physical and regularization constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelParams {
    pub gamma: f64,
    #[serde(default)]
    pub kappa: f64,
    #[serde(default)]
    pub r0: f64,
    #[serde(default)]
    pub r1: f64,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default)]
    pub mu: f64,
    #[serde(default)]
    pub eta: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default = "default_floor")]
    pub floor_rho: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self {
            gamma: 1.5,
            kappa: 0.0,
            r0: 0.0,
            r1: 0.0,
            epsilon: 0.0,
            mu: 0.0,
            eta: 0.0,
            delta: 0.0,
            floor_rho: default_floor(),
        }
    }
}

impl ModelParams {
    /// Problems with the parameter set, keyed by field name.
    pub fn violations(&self) -> Vec<(String, String)> {
        let mut v = Vec::new();
        if !(self.gamma.is_finite() && self.gamma > 1.0) {
            v.push(("gamma".into(), "γ > 1 is required".into()));
        }
        for (name, val) in [
            ("kappa", self.kappa),
            ("r0", self.r0),
            ("r1", self.r1),
            ("epsilon", self.epsilon),
            ("mu", self.mu),
            ("eta", self.eta),
            ("delta", self.delta),
        ] {
            if !(val.is_finite() && val >= 0.0) {
                v.push((name.into(), "must be finite and >= 0".into()));
            }
        }
        if !(self.floor_rho.is_finite() && self.floor_rho > 0.0) {
            v.push(("floor_rho".into(), "must be > 0".into()));
        }
        v
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct EnergyBreakdown {
    pub kinetic: f64,
    pub pressure: f64,
    pub cold: f64,
    pub quantum: f64,
    pub hyper: f64,
    pub total: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BDEntropyBreakdown {
    pub effective_kinetic: f64,
    pub hyper: f64,
    pub quantum: f64,
    pub pressure: f64,
    pub cold: f64,
    pub log_term: f64,
    pub dissipations: BTreeMap<String, f64>,
    /// `R1`..`R6`.
    pub remainders: [f64; 6],
    /// ε r₀ ∫Δρ/ρ, the part of R6 left after substituting the continuity equation.
    pub log_correction: f64,
}

impl BDEntropyBreakdown {
    /// Entropy without the −r₀∫log ρ term.
    pub fn total_without_log(&self) -> f64 {
        self.effective_kinetic + self.hyper + self.quantum + self.pressure + self.cold
    }

    pub fn total(&self) -> f64 {
        self.total_without_log() + self.log_term
    }
}

/// The three integrals of the Jüngel inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JungelTerms {
    /// ∫ρ|∇²log ρ|²
    pub d: f64,
    /// ∫|∇²√ρ|²
    pub a: f64,
    /// ∫|∇ρ^{1/4}|⁴
    pub b: f64,
}

pub fn check_positive(rho: &ScalarField) -> Result<()> {
    let min = rho.min();
    if min > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveDensity { min })
    }
}

/// Pointwise √max(ρ, floor). The flag reports whether the floor was hit.
pub fn sqrt_density(rho: &ScalarField, floor: f64) -> (ScalarField, bool) {
    let mut floored = false;
    let vals = rho
        .values()
        .iter()
        .map(|&r| {
            if r < floor {
                floored = true;
                floor.sqrt()
            } else {
                r.sqrt()
            }
        })
        .collect();
    (ScalarField::from_vec(*rho.grid(), vals), floored)
}

fn frob_sq(h: &[ScalarField]) -> ScalarField {
    let g = *h[0].grid();
    let mut out = vec![0.0; g.len()];
    for f in h {
        for (o, v) in out.iter_mut().zip(f.values()) {
            *o += v * v;
        }
    }
    ScalarField::from_vec(g, out)
}

/// √ρ projected onto the dealiased subspace.
pub(crate) fn smooth_sqrt(rho: &ScalarField) -> ScalarField {
    project(&rho.map(f64::sqrt))
}

/// P(log ρ).
pub(crate) fn smooth_log(rho: &ScalarField) -> ScalarField {
    project(&rho.map(f64::ln))
}

/// Δ√ρ/√ρ.
pub fn bohm_potential(rho: &ScalarField) -> Result<ScalarField> {
    check_positive(rho)?;
    Ok(bohm_unchecked(rho))
}

fn bohm_unchecked(rho: &ScalarField) -> ScalarField {
    let s = smooth_sqrt(rho);
    let ls = laplacian(&s);
    project(&ls.zip_map(&s, |a, b| a / b))
}

/// κρ∇(Δ√ρ/√ρ).
pub fn bohm_force_strong(rho: &ScalarField, kappa: f64) -> Result<VectorField> {
    check_positive(rho)?;
    if kappa == 0.0 {
        return Ok(VectorField::zeros(*rho.grid()));
    }
    let b = bohm_unchecked(rho);
    Ok(gradient(&b).map_components(|c| spectral::product(rho, c).scale(kappa)))
}

/// (κ/2) div(ρ∇²log ρ).
pub fn bohm_force_divform(rho: &ScalarField, kappa: f64) -> Result<VectorField> {
    check_positive(rho)?;
    let g = *rho.grid();
    if kappa == 0.0 {
        return Ok(VectorField::zeros(g));
    }
    let d = g.dim();
    let h = hessian(&smooth_log(rho));
    let comps = (0..d)
        .map(|i| {
            let row = VectorField::from_components(
                (0..d).map(|j| spectral::product(rho, &h[i * d + j])).collect(),
            );
            spectral::divergence(&row).scale(0.5 * kappa)
        })
        .collect();
    Ok(VectorField::from_components(comps))
}

/// Σ_k |k|^{2p} |ρ̂_k|² · |Ω|, i.e. ∫|∇^p ρ|² in the Δ-power sense.
pub(crate) fn sobolev_seminorm_sq(rho: &ScalarField, p: u32) -> f64 {
    // modes outside the dealiased box carry only round-off, which |k|^{2p} would amplify
    let c = spectral::dealias(&spectral::forward_unchecked(rho));
    let g = *rho.grid();
    let s: f64 = c
        .data()
        .iter()
        .enumerate()
        .map(|(i, z)| g.k_squared(i).powi(p as i32) * z.norm_sqr())
        .sum();
    s * g.volume()
}

fn symmetric_gradient_sq(u: &VectorField) -> ScalarField {
    let d = u.dim();
    let j = spectral::jacobian(u);
    let g = *u.grid();
    let mut out = vec![0.0; g.len()];
    for a in 0..d {
        for b in 0..d {
            let (x, y) = (j[a * d + b].values(), j[b * d + a].values());
            for (o, (p, q)) in out.iter_mut().zip(x.iter().zip(y)) {
                let s = 0.5 * (p + q);
                *o += s * s;
            }
        }
    }
    ScalarField::from_vec(g, out)
}

fn antisymmetric_gradient_sq(u: &VectorField) -> ScalarField {
    let d = u.dim();
    let j = spectral::jacobian(u);
    let g = *u.grid();
    let mut out = vec![0.0; g.len()];
    for a in 0..d {
        for b in 0..d {
            let (x, y) = (j[a * d + b].values(), j[b * d + a].values());
            for (o, (p, q)) in out.iter_mut().zip(x.iter().zip(y)) {
                let s = p - q;
                *o += s * s;
            }
        }
    }
    ScalarField::from_vec(g, out)
}

fn grad_sq(f: &ScalarField) -> ScalarField {
    gradient(f).norm_squared()
}

fn check_same(rho: &ScalarField, u: &VectorField) -> Result<()> {
    if rho.grid() == u.grid() {
        Ok(())
    } else {
        Err(Error::GridMismatch)
    }
}

/// Itemized energy
/// ½∫ρ|u|² + ∫ρ^γ/(γ−1) + (η/11)∫ρ⁻¹⁰ + κ∫|∇√ρ|² + (δ/2)∫|∇Δ⁴ρ|².
pub fn energy(rho: &ScalarField, u: &VectorField, p: &ModelParams) -> Result<EnergyBreakdown> {
    check_positive(rho)?;
    check_same(rho, u)?;
    let kinetic = 0.5 * spectral::inner(rho, &u.norm_squared());
    let pressure = integrate(&rho.map(|r| r.powf(p.gamma))) / (p.gamma - 1.0);
    let cold = if p.eta > 0.0 {
        p.eta / (COLD_EXPONENT + 1) as f64 * integrate(&rho.map(|r| r.powi(-COLD_EXPONENT)))
    } else {
        0.0
    };
    let quantum = if p.kappa > 0.0 {
        p.kappa * integrate(&grad_sq(&smooth_sqrt(rho)))
    } else {
        0.0
    };
    let hyper = if p.delta > 0.0 {
        0.5 * p.delta * sobolev_seminorm_sq(rho, HYPER_POWER)
    } else {
        0.0
    };
    Ok(EnergyBreakdown {
        kinetic,
        pressure,
        cold,
        quantum,
        hyper,
        total: kinetic + pressure + cold + quantum + hyper,
    })
}

/// Rate of energy dissipation, one entry per mechanism.
pub fn dissipation_rates(
    rho: &ScalarField,
    u: &VectorField,
    p: &ModelParams,
) -> Result<BTreeMap<String, f64>> {
    check_positive(rho)?;
    check_same(rho, u)?;
    let mut m = BTreeMap::new();
    let u2 = u.norm_squared();
    let grho2 = grad_sq(rho);
    m.insert(
        "viscous".to_string(),
        spectral::inner(rho, &symmetric_gradient_sq(u)),
    );
    m.insert(
        "biharmonic".to_string(),
        if p.mu > 0.0 {
            p.mu * integrate(&spectral::vector_laplacian(u).norm_squared())
        } else {
            0.0
        },
    );
    m.insert(
        "hyper".to_string(),
        if p.epsilon > 0.0 && p.delta > 0.0 {
            p.epsilon * p.delta * sobolev_seminorm_sq(rho, 10)
        } else {
            0.0
        },
    );
    m.insert(
        "pressure".to_string(),
        p.epsilon * p.gamma * integrate(&rho.zip_map(&grho2, |r, g| r.powf(p.gamma - 2.0) * g)),
    );
    m.insert(
        "cold".to_string(),
        if p.eta > 0.0 {
            10.0 * p.epsilon * p.eta * integrate(&rho.zip_map(&grho2, |r, g| r.powi(-12) * g))
        } else {
            0.0
        },
    );
    m.insert("drag_linear".to_string(), p.r0 * integrate(&u2));
    m.insert(
        "drag_cubic".to_string(),
        p.r1 * integrate(&rho.zip_map(&u2, |r, q| r * q * q)),
    );
    m.insert(
        "quantum".to_string(),
        if p.kappa > 0.0 && p.epsilon > 0.0 {
            0.5 * p.kappa * p.epsilon * log_hessian_integral(rho)
        } else {
            0.0
        },
    );
    Ok(m)
}

/// ∫ρ|∇²log ρ|² with the Frobenius norm.
fn log_hessian_integral(rho: &ScalarField) -> f64 {
    spectral::inner(rho, &frob_sq(&hessian(&smooth_log(rho))))
}

/// (D, A, B) for the Jüngel inequalities D ≥ A/7 and D ≥ B/8.
pub fn jungel_terms(rho: &ScalarField) -> Result<JungelTerms> {
    check_positive(rho)?;
    let d = log_hessian_integral(rho);
    let a = integrate(&frob_sq(&hessian(&smooth_sqrt(rho))));
    let q = grad_sq(&project(&rho.map(|r| r.powf(0.25))));
    let b = integrate(&q.map(|x| x * x));
    Ok(JungelTerms { d, a, b })
}

/// |∫(Δ√ρ/√ρ)Δρ − ½D| / max(1, ½D).
pub fn ibp_identity_residual(rho: &ScalarField) -> Result<f64> {
    check_positive(rho)?;
    let lhs = spectral::inner(&bohm_unchecked(rho), &laplacian(rho));
    let half_d = 0.5 * log_hessian_integral(rho);
    Ok((lhs - half_d).abs() / half_d.max(1.0))
}

/// ∫ −log min(ρ, 1).
pub fn log_minus_mass(rho: &ScalarField) -> Result<f64> {
    check_positive(rho)?;
    Ok(integrate(&rho.map(|r| -(r.min(1.0)).ln())))
}

/// Itemized BD entropy with its dissipation and remainder terms.
pub fn bd_entropy(rho: &ScalarField, u: &VectorField, p: &ModelParams) -> Result<BDEntropyBreakdown> {
    let e = energy(rho, u, p)?;
    let g = *rho.grid();
    let d = g.dim();
    let grad_rho = gradient(rho);
    let inv = rho.map(|r| 1.0 / r);
    let grad_log = grad_rho.scale_by(&inv);
    let w = u.add(&grad_log);
    let effective_kinetic = 0.5 * spectral::inner(rho, &w.norm_squared());
    let log_term = if p.r0 > 0.0 {
        -p.r0 * integrate(&rho.map(f64::ln))
    } else {
        0.0
    };

    let eps1 = 1.0 + p.epsilon;
    let grho2 = grad_rho.norm_squared();
    let u2 = u.norm_squared();
    let lap_rho = laplacian(rho);
    let mut diss = BTreeMap::new();
    diss.insert(
        "pressure".to_string(),
        eps1 * p.gamma * integrate(&rho.zip_map(&grho2, |r, g| r.powf(p.gamma - 2.0) * g)),
    );
    diss.insert(
        "rotation".to_string(),
        0.25 * spectral::inner(rho, &antisymmetric_gradient_sq(u)),
    );
    diss.insert(
        "quantum".to_string(),
        if p.kappa > 0.0 {
            0.5 * p.kappa * eps1 * log_hessian_integral(rho)
        } else {
            0.0
        },
    );
    diss.insert(
        "cold".to_string(),
        if p.eta > 0.0 {
            10.0 * p.eta * eps1 * integrate(&rho.zip_map(&grho2, |r, g| r.powi(-12) * g))
        } else {
            0.0
        },
    );
    diss.insert(
        "hyper".to_string(),
        if p.delta > 0.0 {
            p.delta * eps1 * sobolev_seminorm_sq(rho, 10)
        } else {
            0.0
        },
    );
    diss.insert(
        "biharmonic".to_string(),
        if p.mu > 0.0 {
            p.mu * integrate(&spectral::vector_laplacian(u).norm_squared())
        } else {
            0.0
        },
    );
    diss.insert(
        "density_laplacian".to_string(),
        p.epsilon * integrate(&lap_rho.zip_map(rho, |l, r| l * l / r)),
    );
    diss.insert("drag_linear".to_string(), p.r0 * integrate(&u2));
    diss.insert(
        "drag_cubic".to_string(),
        p.r1 * integrate(&rho.zip_map(&u2, |r, q| r * q * q)),
    );

    let mut rem = [0.0; 6];
    if p.epsilon > 0.0 {
        // (∇ρ·∇)u, component i = Σ_j ∂_jρ ∂_j u_i
        let jac = spectral::jacobian(u);
        let mut r1 = 0.0;
        for i in 0..d {
            let mut comp = vec![0.0; g.len()];
            for j in 0..d {
                for ((c, a), b) in comp
                    .iter_mut()
                    .zip(grad_rho.component(j).values())
                    .zip(jac[i * d + j].values())
                {
                    *c += a * b;
                }
            }
            r1 += spectral::inner(&ScalarField::from_vec(g, comp), grad_log.component(i));
        }
        rem[0] = -p.epsilon * r1;
        rem[1] = 0.5 * p.epsilon * spectral::inner(&lap_rho, &grad_log.norm_squared());
        let div_m = spectral::divergence(&u.map_components(|c| spectral::product(rho, c)));
        rem[2] = -p.epsilon * integrate(&div_m.zip_map(&lap_rho, |a, l| a * l).pointwise_mul(&inv));
    }
    if p.mu > 0.0 {
        let lap_u = spectral::vector_laplacian(u);
        let g_lap_log = gradient(&laplacian(&smooth_log(rho)));
        rem[3] = -p.mu * spectral::inner_vec(&lap_u, &g_lap_log);
    }
    if p.r1 > 0.0 {
        rem[4] = -p.r1 * spectral::inner_vec(&u.scale_by(&u2), &grad_rho);
    }
    if p.r0 > 0.0 {
        rem[5] = -p.r0 * spectral::inner_vec(u, &grad_log);
    }
    let log_correction = if p.r0 > 0.0 && p.epsilon > 0.0 {
        p.epsilon * p.r0 * integrate(&lap_rho.pointwise_mul(&inv))
    } else {
        0.0
    };

    Ok(BDEntropyBreakdown {
        effective_kinetic,
        hyper: e.hyper,
        quantum: e.quantum,
        pressure: e.pressure,
        cold: e.cold,
        log_term,
        dissipations: diss,
        remainders: rem,
        log_correction,
    })
}

/// κ^{1/2}‖√ρ‖_{H²} and κ^{1/4}‖∇ρ^{1/4}‖_{L⁴} at one instant, squared and
/// raised to the respective integrability power so they can be summed in time.
pub fn kappa_bound_densities(rho: &ScalarField) -> (f64, f64) {
    let s = smooth_sqrt(rho);
    let h2 = spectral::inner(&s, &s)
        + integrate(&grad_sq(&s))
        + integrate(&frob_sq(&hessian(&s)));
    let q = grad_sq(&project(&rho.map(|r| r.powf(0.25))));
    let l4 = integrate(&q.map(|x| x * x));
    (h2, l4)
}
