use nalgebra::{DMatrix, DVector, SymmetricEigen};

use super::basis::GalerkinBasis;
use crate::error::{Error, Result};
use crate::functionals::check_positive;
use crate::spectral::{self, ScalarField};

/// M_ij = ∫ρ e_i·e_j.
#[derive(Debug, Clone)]
pub struct MassMatrix {
    entries: DMatrix<f64>,
}

impl MassMatrix {
    pub fn new(rho: &ScalarField, basis: &GalerkinBasis) -> Result<Self> {
        check_positive(rho)?;
        if rho.grid() != basis.grid() {
            return Err(Error::GridMismatch);
        }
        let n = basis.len();
        let mut m = DMatrix::zeros(n, n);
        let weighted: Vec<ScalarField> = (0..n)
            .map(|i| rho.pointwise_mul(basis.profile(i)))
            .collect();
        for i in 0..n {
            for j in i..n {
                if basis.modes()[i].component != basis.modes()[j].component {
                    continue;
                }
                let v = spectral::inner(&weighted[i], basis.profile(j));
                m[(i, j)] = v;
                m[(j, i)] = v;
            }
        }
        Ok(Self { entries: m })
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.entries
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        let v = &self.entries * DVector::from_column_slice(x);
        v.iter().copied().collect()
    }

    pub fn solve(&self, b: &[f64]) -> Result<Vec<f64>> {
        let chol = self.entries.clone().cholesky().ok_or(Error::SingularMass)?;
        let x = chol.solve(&DVector::from_column_slice(b));
        Ok(x.iter().copied().collect())
    }

    pub fn inverse(&self) -> Result<DMatrix<f64>> {
        let chol = self.entries.clone().cholesky().ok_or(Error::SingularMass)?;
        Ok(chol.inverse())
    }

    pub fn min_eigenvalue(&self) -> f64 {
        SymmetricEigen::new(self.entries.clone())
            .eigenvalues
            .iter()
            .copied()
            .fold(f64::INFINITY, f64::min)
    }

    /// ‖M⁻¹‖₂ = 1/λ_min.
    pub fn inverse_norm(&self) -> f64 {
        1.0 / self.min_eigenvalue()
    }
}

/// Spectral norm of a symmetric matrix.
fn sym_norm(m: DMatrix<f64>) -> f64 {
    SymmetricEigen::new(m)
        .eigenvalues
        .iter()
        .fold(0.0, |a: f64, v| a.max(v.abs()))
}

/// ‖M(ρ₁)⁻¹ − M(ρ₂)⁻¹‖₂ / ‖ρ₁ − ρ₂‖_{L¹}; zero when the densities coincide.
pub fn lipschitz_check(rho1: &ScalarField, rho2: &ScalarField, basis: &GalerkinBasis) -> Result<f64> {
    if rho1.grid() != rho2.grid() {
        return Err(Error::GridMismatch);
    }
    let l1 = spectral::integrate(&rho1.zip_map(rho2, |a, b| (a - b).abs()));
    let m1 = MassMatrix::new(rho1, basis)?.inverse()?;
    let m2 = MassMatrix::new(rho2, basis)?.inverse()?;
    if l1 == 0.0 {
        return Ok(0.0);
    }
    Ok(sym_norm(m1 - m2) / l1)
}
