use super::basis::GalerkinBasis;
use super::mass::MassMatrix;
use crate::error::{Error, Result};
use crate::functionals::{bohm_force_strong, check_positive, smooth_sqrt, ModelParams, HYPER_POWER};
use crate::spectral::{
    self, differentiate_coeffs, forward_unchecked, gradient, gradient_of_coeffs, inverse_unchecked,
    jacobian, laplacian, laplacian_power_coeffs, product, ScalarField, SpectralCoeffs,
    VectorField,
};

/// Density and Galerkin coefficients at one instant.
#[derive(Debug, Clone)]
pub struct State {
    pub time: f64,
    pub rho: ScalarField,
    pub lambda: Vec<f64>,
    /// Σ λ_i e_i, kept in sync with `lambda`.
    pub u: VectorField,
}

impl State {
    pub fn new(time: f64, rho: ScalarField, lambda: Vec<f64>, basis: &GalerkinBasis) -> Result<Self> {
        check_positive(&rho)?;
        if lambda.len() != basis.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                basis.len(),
                lambda.len()
            )));
        }
        if rho.grid() != basis.grid() {
            return Err(Error::GridMismatch);
        }
        let u = basis.reconstruct(&lambda);
        Ok(Self {
            time,
            rho,
            lambda,
            u,
        })
    }
}

/// Outcome of one accepted Picard solve.
#[derive(Debug, Clone)]
pub struct Advance {
    pub state: State,
    pub iterations: usize,
    /// max-norm change of λ after each iteration.
    pub residuals: Vec<f64>,
    pub floor_active: bool,
}

fn momentum_flux_divergence(rho: &ScalarField, u: &VectorField) -> SpectralCoeffs {
    let g = *rho.grid();
    let mut acc = SpectralCoeffs::zeros(g);
    for (a, c) in u.components().iter().enumerate() {
        let mut m = forward_unchecked(&rho.pointwise_mul(c));
        spectral::dealias_in_place(&mut m);
        differentiate_coeffs(&mut m, a, 1);
        for (x, y) in acc.data_mut().iter_mut().zip(m.data()) {
            *x += y;
        }
    }
    acc
}

/// One step of ρ_t + div(ρu) = εΔρ: transport explicit and dealiased,
/// diffusion implicit. The k = 0 coefficient is never touched.
pub fn continuity_step(rho: &ScalarField, u: &VectorField, epsilon: f64, dt: f64) -> Result<ScalarField> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    if !(epsilon >= 0.0) {
        return Err(Error::InvalidArgument("epsilon must be >= 0".into()));
    }
    check_positive(rho)?;
    if rho.grid() != u.grid() {
        return Err(Error::GridMismatch);
    }
    let g = *rho.grid();
    let flux = momentum_flux_divergence(rho, u);
    let mut c = forward_unchecked(rho);
    for (i, (z, f)) in c.data_mut().iter_mut().zip(flux.data()).enumerate() {
        if i == 0 {
            continue;
        }
        *z = (*z - f * dt) / (1.0 + epsilon * g.k_squared(i) * dt);
    }
    let out = inverse_unchecked(&c);
    let min = out.min();
    if !(min > 0.0) {
        return Err(Error::StepRejected {
            time: f64::NAN,
            reason: format!("density reached {min:e}"),
            suggested_dt: 0.5 * dt,
        });
    }
    Ok(out)
}

/// ∇Δ⁹ρ.
fn hyper_gradient(rho: &ScalarField) -> VectorField {
    let mut c = forward_unchecked(rho);
    spectral::dealias_in_place(&mut c);
    laplacian_power_coeffs(&mut c, HYPER_POWER);
    gradient_of_coeffs(&c)
}

/// (∇ρ·∇)u, component i = Σ_j ∂_jρ ∂_j u_i.
fn grad_rho_dot_grad_u(grad_rho: &VectorField, jac: &[ScalarField]) -> VectorField {
    let d = grad_rho.dim();
    let g = *grad_rho.grid();
    VectorField::from_components(
        (0..d)
            .map(|i| {
                let mut out = vec![0.0; g.len()];
                for j in 0..d {
                    for ((o, a), b) in out
                        .iter_mut()
                        .zip(grad_rho.component(j).values())
                        .zip(jac[i * d + j].values())
                    {
                        *o += a * b;
                    }
                }
                ScalarField::from_vec(g, out)
            })
            .collect(),
    )
}

/// Pieces of the weak momentum form
/// ∫V·φ + ∫A:∇φ + ∫P div φ − μ∫Δu·Δφ with
/// V = −ε(∇ρ·∇)u − r₀u − r₁ρ|u|²u − 2κΔs∇s + δρ∇Δ⁹ρ,
/// A = ρu⊗u − ρ𝔻u and P = ρ^γ − ηρ⁻¹⁰ − κsΔs, where s = √ρ.
pub struct WeakTerms {
    v: VectorField,
    a: Vec<ScalarField>,
    p: ScalarField,
    lap_u: Option<VectorField>,
    mu: f64,
}

impl WeakTerms {
    pub fn new(rho: &ScalarField, u: &VectorField, p: &ModelParams) -> Self {
        let g = *rho.grid();
        let d = g.dim();
        let len = g.len();
        let jac = jacobian(u);
        let u2 = u.norm_squared();

        let mut v: Vec<Vec<f64>> = vec![vec![0.0; len]; d];
        if p.epsilon > 0.0 {
            let adv = grad_rho_dot_grad_u(&gradient(rho), &jac);
            for (vi, a) in v.iter_mut().zip(adv.components()) {
                for (x, y) in vi.iter_mut().zip(a.values()) {
                    *x -= p.epsilon * y;
                }
            }
        }
        for (i, vi) in v.iter_mut().enumerate() {
            let ui = u.component(i).values();
            for n in 0..len {
                vi[n] -= p.r0 * ui[n] + p.r1 * rho.values()[n] * u2.values()[n] * ui[n];
            }
        }
        let mut pres: Vec<f64> = rho
            .values()
            .iter()
            .map(|&r| r.powf(p.gamma) - if p.eta > 0.0 { p.eta * r.powi(-10) } else { 0.0 })
            .collect();
        if p.kappa > 0.0 {
            let s = smooth_sqrt(rho);
            let ls = laplacian(&s);
            let gs = gradient(&s);
            for (i, vi) in v.iter_mut().enumerate() {
                for n in 0..len {
                    vi[n] -= 2.0 * p.kappa * ls.values()[n] * gs.component(i).values()[n];
                }
            }
            for n in 0..len {
                pres[n] -= p.kappa * s.values()[n] * ls.values()[n];
            }
        }
        if p.delta > 0.0 {
            let h = hyper_gradient(rho);
            for (i, vi) in v.iter_mut().enumerate() {
                for n in 0..len {
                    vi[n] += p.delta * rho.values()[n] * h.component(i).values()[n];
                }
            }
        }

        let mut a = Vec::with_capacity(d * d);
        for i in 0..d {
            for j in 0..d {
                let (ui, uj) = (u.component(i).values(), u.component(j).values());
                let (dij, dji) = (jac[i * d + j].values(), jac[j * d + i].values());
                let vals = (0..len)
                    .map(|n| rho.values()[n] * (ui[n] * uj[n] - 0.5 * (dij[n] + dji[n])))
                    .collect();
                a.push(ScalarField::from_vec(g, vals));
            }
        }
        Self {
            v: VectorField::from_components(v.into_iter().map(|x| ScalarField::from_vec(g, x)).collect()),
            a,
            p: ScalarField::from_vec(g, pres),
            lap_u: (p.mu > 0.0).then(|| spectral::vector_laplacian(u)),
            mu: p.mu,
        }
    }

    pub fn pair_basis(&self, basis: &GalerkinBasis) -> Vec<f64> {
        let mut rhs = basis.pair(&self.v);
        for (r, t) in rhs.iter_mut().zip(basis.pair_tensor(&self.a)) {
            *r += t;
        }
        for (r, t) in rhs.iter_mut().zip(basis.pair_divergence(&self.p)) {
            *r += t;
        }
        if let Some(lap_u) = &self.lap_u {
            let paired = basis.pair(lap_u);
            for (i, r) in rhs.iter_mut().enumerate() {
                // −μ∫Δu·Δe_i with Δe_i = −|k_i|² e_i
                *r += self.mu * basis.k_squared(i) * paired[i];
            }
        }
        rhs
    }

    /// The pairing with an arbitrary test field, and the sum of the absolute
    /// values of its four parts.
    pub fn pair_field(&self, phi: &VectorField) -> (f64, f64) {
        let d = phi.dim();
        let jac = jacobian(phi);
        let t1 = spectral::inner_vec(&self.v, phi);
        let t2: f64 = (0..d * d).map(|k| spectral::inner(&self.a[k], &jac[k])).sum();
        let t3 = spectral::inner(&self.p, &spectral::divergence(phi));
        let t4 = match &self.lap_u {
            Some(l) => -self.mu * spectral::inner_vec(l, &spectral::vector_laplacian(phi)),
            None => 0.0,
        };
        (t1 + t2 + t3 + t4, t1.abs() + t2.abs() + t3.abs() + t4.abs())
    }
}

/// ⟨𝔑(ρ, u), e_i⟩ for every basis vector, assembled in weak form
/// (see [`momentum_strong`] for the strong form of the same operator).
pub fn momentum_rhs(
    rho: &ScalarField,
    u: &VectorField,
    p: &ModelParams,
    basis: &GalerkinBasis,
) -> Result<Vec<f64>> {
    check_positive(rho)?;
    if rho.grid() != basis.grid() || u.grid() != basis.grid() {
        return Err(Error::GridMismatch);
    }
    Ok(WeakTerms::new(rho, u, p).pair_basis(basis))
}

/// Strong form of the momentum right-hand side,
/// −div(ρu⊗u) + div(ρ𝔻u) − μΔ²u − ε(∇ρ·∇)u + η∇ρ⁻¹⁰ − ∇ρ^γ − r₀u − r₁ρ|u|²u
/// + κρ∇(Δ√ρ/√ρ) + δρ∇Δ⁹ρ, with every product dealiased.
pub fn momentum_strong(rho: &ScalarField, u: &VectorField, p: &ModelParams) -> Result<VectorField> {
    check_positive(rho)?;
    let g = *rho.grid();
    let d = g.dim();
    let jac = jacobian(u);
    let u2 = u.norm_squared();
    let mut comps: Vec<ScalarField> = Vec::with_capacity(d);
    let grad_p = gradient(&spectral::project(&rho.map(|r| {
        r.powf(p.gamma) - if p.eta > 0.0 { p.eta * r.powi(-10) } else { 0.0 }
    })));
    let bohm = bohm_force_strong(rho, p.kappa)?;
    let hyper = if p.delta > 0.0 {
        Some(hyper_gradient(rho))
    } else {
        None
    };
    let adv = if p.epsilon > 0.0 {
        Some(grad_rho_dot_grad_u(&gradient(rho), &jac))
    } else {
        None
    };
    for i in 0..d {
        let ui = u.component(i);
        // row i of ρu⊗u − ρ𝔻u, differentiated along each axis
        let mut flux_hat = SpectralCoeffs::zeros(g);
        for j in 0..d {
            let uj = u.component(j);
            let (dij, dji) = (&jac[i * d + j], &jac[j * d + i]);
            let row = ScalarField::from_vec(
                g,
                (0..g.len())
                    .map(|n| {
                        rho.values()[n]
                            * (ui.values()[n] * uj.values()[n]
                                - 0.5 * (dij.values()[n] + dji.values()[n]))
                    })
                    .collect(),
            );
            let mut c = forward_unchecked(&row);
            spectral::dealias_in_place(&mut c);
            differentiate_coeffs(&mut c, j, 1);
            for (x, y) in flux_hat.data_mut().iter_mut().zip(c.data()) {
                *x -= y;
            }
        }
        let mut f = inverse_unchecked(&flux_hat);
        f = &f - grad_p.component(i);
        if p.mu > 0.0 {
            let mut c = forward_unchecked(ui);
            laplacian_power_coeffs(&mut c, 2);
            f = &f - &inverse_unchecked(&c).scale(p.mu);
        }
        if let Some(adv) = &adv {
            f = &f - &spectral::project(adv.component(i)).scale(p.epsilon);
        }
        let drag = ui.zip_map(&rho.pointwise_mul(&u2), |a, b| p.r0 * a + p.r1 * b * a);
        f = &f - &spectral::project(&drag);
        f = &f + bohm.component(i);
        if let Some(h) = &hyper {
            f = &f + &product(rho, h.component(i)).scale(p.delta);
        }
        comps.push(f);
    }
    Ok(VectorField::from_components(comps))
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).fold(0.0, |m, (x, y)| m.max((x - y).abs()))
}

/// Advance (ρ, λ) over one interval of length `dt` by Picard iteration on
/// M(ρ^{n+1}) λ^{n+1} = M(ρⁿ) λⁿ + dt ⟨𝔑(ρ^{n+1}, u^{n+1}), e⟩ with
/// ρ^{n+1} = S(ρⁿ, u^{n+1}) given by [`continuity_step`].
pub fn fixed_point_advance(
    state: &State,
    p: &ModelParams,
    basis: &GalerkinBasis,
    dt: f64,
    tol: f64,
    max_iter: usize,
) -> Result<Advance> {
    if !(tol > 0.0) || max_iter == 0 {
        return Err(Error::InvalidArgument("tol must be > 0 and max_iter >= 1".into()));
    }
    let t_new = state.time + dt;
    let reject = |e: Error| match e {
        Error::StepRejected {
            reason,
            suggested_dt,
            ..
        } => Error::StepRejected {
            time: state.time,
            reason,
            suggested_dt,
        },
        other => other,
    };
    let b = MassMatrix::new(&state.rho, basis)?.apply(&state.lambda);
    let mut lambda = state.lambda.clone();
    let mut u = state.u.clone();
    let mut residuals = Vec::new();
    for it in 1..=max_iter {
        let rho = continuity_step(&state.rho, &u, p.epsilon, dt).map_err(reject)?;
        let n = momentum_rhs(&rho, &u, p, basis)?;
        let rhs: Vec<f64> = b.iter().zip(&n).map(|(bi, ni)| bi + dt * ni).collect();
        let next = MassMatrix::new(&rho, basis)?.solve(&rhs)?;
        let res = max_abs_diff(&next, &lambda);
        residuals.push(res);
        if !res.is_finite() {
            break;
        }
        lambda = next;
        u = basis.reconstruct(&lambda);
        let scale = lambda.iter().fold(1.0f64, |m, x| m.max(x.abs()));
        if res <= tol * scale {
            let rho = continuity_step(&state.rho, &u, p.epsilon, dt).map_err(reject)?;
            let floor_active = rho.min() < p.floor_rho;
            return Ok(Advance {
                state: State {
                    time: t_new,
                    rho,
                    lambda,
                    u,
                },
                iterations: it,
                residuals,
                floor_active,
            });
        }
    }
    Err(Error::StepRejected {
        time: state.time,
        reason: format!(
            "fixed point not reached in {max_iter} iterations (last change {:e})",
            residuals.last().copied().unwrap_or(f64::NAN)
        ),
        suggested_dt: 0.5 * dt,
    })
}
