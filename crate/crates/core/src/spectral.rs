//! Fourier collocation on the periodic box `[0, L)^d`.
//!
//! Fields are stored row-major over the node lattice with axis 0 varying
//! slowest. The forward transform is normalized so that a constant field `c`
//! has coefficient `c` at `k = 0`, which makes coefficients read directly as
//! Fourier amplitudes. Every nonlinear product in the crate goes through
//! [`product`] or [`project`], which apply the two-thirds truncation.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

pub use rustfft::num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

fn plan(n: usize, inverse: bool) -> Arc<dyn Fft<f64>> {
    PLANNER.with(|p| {
        let mut p = p.borrow_mut();
        if inverse {
            p.plan_fft_inverse(n)
        } else {
            p.plan_fft_forward(n)
        }
    })
}

/// Uniform node lattice on the torus.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PeriodicGrid {
    dim: usize,
    n: usize,
    length: f64,
}

impl PeriodicGrid {
    pub fn new(dim: usize, n: usize, length: f64) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::InvalidGrid(format!("dim must be 1, 2 or 3, got {dim}")));
        }
        if n < 8 || !n.is_multiple_of(2) {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be even and >= 8, got {n}"
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!("length must be positive, got {length}")));
        }
        Ok(Self { dim, n, length })
    }

    /// Grid with the default period 2π on every axis.
    pub fn with_default_length(dim: usize, n: usize) -> Result<Self> {
        Self::new(dim, n, 2.0 * PI)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n as f64
    }

    pub fn len(&self) -> usize {
        self.n.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// |Ω|
    pub fn volume(&self) -> f64 {
        self.length.powi(self.dim as i32)
    }

    /// Fundamental wavenumber 2π/L.
    pub fn k0(&self) -> f64 {
        2.0 * PI / self.length
    }

    /// Signed integer mode for a transform index along one axis.
    pub fn mode(&self, i: usize) -> i64 {
        if i < self.n / 2 {
            i as i64
        } else {
            i as i64 - self.n as i64
        }
    }

    /// Transform index of a signed mode (inverse of [`mode`](Self::mode)).
    pub fn index_of_mode(&self, m: i64) -> usize {
        m.rem_euclid(self.n as i64) as usize
    }

    /// Split a flat index into per-axis indices.
    pub fn unravel(&self, mut flat: usize) -> [usize; 3] {
        let mut idx = [0usize; 3];
        for a in (0..self.dim).rev() {
            idx[a] = flat % self.n;
            flat /= self.n;
        }
        idx
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter().take(self.dim).fold(0, |acc, &i| acc * self.n + i)
    }

    /// Physical coordinates of a node.
    pub fn coords(&self, flat: usize) -> [f64; 3] {
        let idx = self.unravel(flat);
        let h = self.spacing();
        let mut x = [0.0; 3];
        for a in 0..self.dim {
            x[a] = idx[a] as f64 * h;
        }
        x
    }

    /// Signed integer mode vector for a flat coefficient index.
    pub fn mode_vec(&self, flat: usize) -> [i64; 3] {
        let idx = self.unravel(flat);
        let mut m = [0i64; 3];
        for a in 0..self.dim {
            m[a] = self.mode(idx[a]);
        }
        m
    }

    /// Physical wavevector for a flat coefficient index.
    pub fn wavevector(&self, flat: usize) -> [f64; 3] {
        let m = self.mode_vec(flat);
        let k0 = self.k0();
        [m[0] as f64 * k0, m[1] as f64 * k0, m[2] as f64 * k0]
    }

    pub fn k_squared(&self, flat: usize) -> f64 {
        let k = self.wavevector(flat);
        k[0] * k[0] + k[1] * k[1] + k[2] * k[2]
    }

    /// Whether a signed mode survives the two-thirds truncation on one axis.
    ///
    /// Kept modes satisfy `3|m| < n`, so a product of two kept modes can
    /// never alias back onto a kept mode.
    pub fn keeps_mode(&self, m: i64) -> bool {
        3 * m.unsigned_abs() < self.n as u64
    }

    /// Largest retained |m| per axis.
    pub fn dealias_cutoff(&self) -> i64 {
        ((self.n - 1) / 3) as i64
    }

    pub fn keeps(&self, flat: usize) -> bool {
        let m = self.mode_vec(flat);
        (0..self.dim).all(|a| self.keeps_mode(m[a]))
    }

    fn is_nyquist(&self, idx: usize) -> bool {
        idx == self.n / 2
    }
}

/// Real field sampled at the grid nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalarField {
    grid: PeriodicGrid,
    values: Vec<f64>,
}

impl ScalarField {
    pub fn new(grid: PeriodicGrid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} values, got {}",
                grid.len(),
                values.len()
            )));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { grid, values })
    }

    /// Internal constructor for values already known to be finite.
    pub(crate) fn from_vec(grid: PeriodicGrid, values: Vec<f64>) -> Self {
        debug_assert_eq!(values.len(), grid.len());
        Self { grid, values }
    }

    pub fn constant(grid: PeriodicGrid, c: f64) -> Self {
        Self::from_vec(grid, vec![c; grid.len()])
    }

    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self::constant(grid, 0.0)
    }

    /// Sample `f` at every node. `f` receives the `dim` coordinates.
    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(&[f64]) -> f64) -> Self {
        let d = grid.dim();
        let values = (0..grid.len())
            .map(|i| {
                let x = grid.coords(i);
                f(&x[..d])
            })
            .collect();
        Self::from_vec(grid, values)
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self::from_vec(self.grid, self.values.iter().map(|&v| f(v)).collect())
    }

    pub fn zip_map(&self, other: &Self, f: impl Fn(f64, f64) -> f64) -> Self {
        debug_assert_eq!(self.grid, other.grid);
        Self::from_vec(
            self.grid,
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        )
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map(|v| c * v)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    pub fn mean(&self) -> f64 {
        self.values.iter().sum::<f64>() / self.values.len() as f64
    }

    /// Pointwise (aliased) product. Use [`product`] when the result feeds a
    /// derivative or re-enters the dynamics.
    pub fn pointwise_mul(&self, other: &Self) -> Self {
        self.zip_map(other, |a, b| a * b)
    }

    fn check_same_grid(&self, other: &Self) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

impl Add for &ScalarField {
    type Output = ScalarField;
    fn add(self, rhs: Self) -> ScalarField {
        self.zip_map(rhs, |a, b| a + b)
    }
}

impl Sub for &ScalarField {
    type Output = ScalarField;
    fn sub(self, rhs: Self) -> ScalarField {
        self.zip_map(rhs, |a, b| a - b)
    }
}

impl Neg for &ScalarField {
    type Output = ScalarField;
    fn neg(self) -> ScalarField {
        self.map(|a| -a)
    }
}

impl Mul<f64> for &ScalarField {
    type Output = ScalarField;
    fn mul(self, rhs: f64) -> ScalarField {
        self.scale(rhs)
    }
}

/// `dim` scalar components on one grid.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorField {
    components: Vec<ScalarField>,
}

impl VectorField {
    pub fn new(components: Vec<ScalarField>) -> Result<Self> {
        let first = components
            .first()
            .ok_or_else(|| Error::InvalidArgument("vector field needs components".into()))?;
        let grid = *first.grid();
        if components.len() != grid.dim() {
            return Err(Error::InvalidArgument(format!(
                "expected {} components, got {}",
                grid.dim(),
                components.len()
            )));
        }
        for c in &components[1..] {
            first.check_same_grid(c)?;
        }
        Ok(Self { components })
    }

    pub(crate) fn from_components(components: Vec<ScalarField>) -> Self {
        Self { components }
    }

    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self::from_components((0..grid.dim()).map(|_| ScalarField::zeros(grid)).collect())
    }

    pub fn from_fn(grid: PeriodicGrid, f: impl Fn(&[f64], usize) -> f64) -> Self {
        Self::from_components(
            (0..grid.dim())
                .map(|c| ScalarField::from_fn(grid, |x| f(x, c)))
                .collect(),
        )
    }

    pub fn grid(&self) -> &PeriodicGrid {
        self.components[0].grid()
    }

    pub fn dim(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, c: usize) -> &ScalarField {
        &self.components[c]
    }

    pub fn components(&self) -> &[ScalarField] {
        &self.components
    }

    pub fn map_components(&self, f: impl Fn(&ScalarField) -> ScalarField) -> Self {
        Self::from_components(self.components.iter().map(f).collect())
    }

    pub fn scale(&self, c: f64) -> Self {
        self.map_components(|f| f.scale(c))
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_components(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self::from_components(
            self.components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// Pointwise |v|².
    pub fn norm_squared(&self) -> ScalarField {
        let g = *self.grid();
        let mut out = vec![0.0; g.len()];
        for c in &self.components {
            for (o, v) in out.iter_mut().zip(c.values()) {
                *o += v * v;
            }
        }
        ScalarField::from_vec(g, out)
    }

    /// Pointwise a·b.
    pub fn dot(&self, other: &Self) -> ScalarField {
        let g = *self.grid();
        let mut out = vec![0.0; g.len()];
        for (a, b) in self.components.iter().zip(&other.components) {
            for ((o, x), y) in out.iter_mut().zip(a.values()).zip(b.values()) {
                *o += x * y;
            }
        }
        ScalarField::from_vec(g, out)
    }

    /// Multiply every component pointwise by a scalar field (aliased).
    pub fn scale_by(&self, s: &ScalarField) -> Self {
        self.map_components(|c| c.pointwise_mul(s))
    }

    pub fn max_abs(&self) -> f64 {
        self.components.iter().fold(0.0, |m, c| m.max(c.max_abs()))
    }
}

/// Complex Fourier coefficients of a real field, same layout as the nodes.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralCoeffs {
    grid: PeriodicGrid,
    data: Vec<Complex64>,
}

impl SpectralCoeffs {
    pub fn new(grid: PeriodicGrid, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != grid.len() {
            return Err(Error::InvalidArgument(format!(
                "expected {} coefficients, got {}",
                grid.len(),
                data.len()
            )));
        }
        if let Some(index) = data.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { grid, data })
    }

    pub fn zeros(grid: PeriodicGrid) -> Self {
        Self {
            grid,
            data: vec![Complex64::new(0.0, 0.0); grid.len()],
        }
    }

    pub fn grid(&self) -> &PeriodicGrid {
        &self.grid
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn data_mut(&mut self) -> &mut [Complex64] {
        &mut self.data
    }

    /// Coefficient of a signed mode vector.
    pub fn get(&self, modes: &[i64]) -> Complex64 {
        self.data[self.flat_of(modes)]
    }

    pub fn set(&mut self, modes: &[i64], value: Complex64) {
        let i = self.flat_of(modes);
        self.data[i] = value;
    }

    fn flat_of(&self, modes: &[i64]) -> usize {
        let mut idx = [0usize; 3];
        for a in 0..self.grid.dim() {
            idx[a] = self.grid.index_of_mode(modes[a]);
        }
        self.grid.ravel(&idx[..self.grid.dim()])
    }

    /// Flat index of the mode -k.
    fn conjugate_index(&self, flat: usize) -> usize {
        let n = self.grid.n();
        let idx = self.grid.unravel(flat);
        let mut neg = [0usize; 3];
        for a in 0..self.grid.dim() {
            neg[a] = (n - idx[a]) % n;
        }
        self.grid.ravel(&neg[..self.grid.dim()])
    }

    /// Largest |c(k) − conj(c(−k))|.
    pub fn hermitian_defect(&self) -> f64 {
        (0..self.data.len())
            .map(|i| (self.data[i] - self.data[self.conjugate_index(i)].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, c| m.max(c.norm()))
    }

    /// Multiply each coefficient by `f(flat index)`.
    pub fn apply(&mut self, f: impl Fn(usize) -> Complex64) {
        for (i, c) in self.data.iter_mut().enumerate() {
            *c *= f(i);
        }
    }
}

fn fft_along_axes(grid: &PeriodicGrid, data: &mut [Complex64], inverse: bool) {
    let n = grid.n();
    let d = grid.dim();
    let total = data.len();
    let fft = plan(n, inverse);
    let mut scratch = vec![Complex64::new(0.0, 0.0); fft.get_inplace_scratch_len()];
    for axis in 0..d {
        let stride = n.pow((d - 1 - axis) as u32);
        if stride == 1 {
            fft.process_with_scratch(data, &mut scratch);
            continue;
        }
        let block = stride * n;
        let mut lines = vec![Complex64::new(0.0, 0.0); total];
        let mut l = 0;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for j in 0..n {
                    lines[l * n + j] = data[base + j * stride];
                }
                l += 1;
            }
        }
        fft.process_with_scratch(&mut lines, &mut scratch);
        l = 0;
        for outer in (0..total).step_by(block) {
            for inner in 0..stride {
                let base = outer + inner;
                for j in 0..n {
                    data[base + j * stride] = lines[l * n + j];
                }
                l += 1;
            }
        }
    }
}

/// Forward transform, normalized by 1/n^d.
pub fn forward(f: &ScalarField) -> Result<SpectralCoeffs> {
    if let Some(index) = f.values.iter().position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    Ok(forward_unchecked(f))
}

pub(crate) fn forward_unchecked(f: &ScalarField) -> SpectralCoeffs {
    let grid = f.grid;
    let mut data: Vec<Complex64> = f.values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fft_along_axes(&grid, &mut data, false);
    let s = 1.0 / grid.len() as f64;
    for c in &mut data {
        *c *= s;
    }
    SpectralCoeffs { grid, data }
}

/// Inverse transform. Rejects coefficient arrays that are not the dual of a
/// real field.
pub fn inverse(c: &SpectralCoeffs) -> Result<ScalarField> {
    let defect = c.hermitian_defect();
    if defect > 1e-10 * c.max_abs().max(1e-300) {
        return Err(Error::NotHermitian { defect });
    }
    Ok(inverse_unchecked(c))
}

pub(crate) fn inverse_unchecked(c: &SpectralCoeffs) -> ScalarField {
    let mut data = c.data.clone();
    fft_along_axes(&c.grid, &mut data, true);
    ScalarField::from_vec(c.grid, data.into_iter().map(|z| z.re).collect())
}

fn check_axis(grid: &PeriodicGrid, axis: usize) -> Result<()> {
    if axis >= grid.dim() {
        Err(Error::AxisOutOfRange {
            axis,
            dim: grid.dim(),
        })
    } else {
        Ok(())
    }
}

fn i_pow(order: u32) -> Complex64 {
    match order % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// Multiply coefficients by (i k_axis)^order in place. Odd orders drop the
/// Nyquist mode, whose derivative is not representable as a real field.
pub(crate) fn differentiate_coeffs(c: &mut SpectralCoeffs, axis: usize, order: u32) {
    let grid = c.grid;
    let phase = i_pow(order);
    let k0 = grid.k0();
    c.apply(|flat| {
        let idx = grid.unravel(flat);
        if order % 2 == 1 && grid.is_nyquist(idx[axis]) {
            return Complex64::new(0.0, 0.0);
        }
        let k = grid.mode(idx[axis]) as f64 * k0;
        phase * k.powi(order as i32)
    });
}

/// Spectral derivative ∂^order/∂x_axis^order. Axes are 0-based.
pub fn derivative(f: &ScalarField, axis: usize, order: u32) -> Result<ScalarField> {
    check_axis(&f.grid, axis)?;
    if order == 0 {
        return Err(Error::InvalidArgument("derivative order must be >= 1".into()));
    }
    let mut c = forward(f)?;
    differentiate_coeffs(&mut c, axis, order);
    Ok(inverse_unchecked(&c))
}

/// Δ^p via multiplication by (−|k|²)^p.
pub fn laplacian_power(f: &ScalarField, p: u32) -> Result<ScalarField> {
    if p == 0 {
        return Err(Error::InvalidArgument("laplacian power must be >= 1".into()));
    }
    let mut c = forward(f)?;
    laplacian_power_coeffs(&mut c, p);
    Ok(inverse_unchecked(&c))
}

pub(crate) fn laplacian_power_coeffs(c: &mut SpectralCoeffs, p: u32) {
    let grid = c.grid;
    c.apply(|flat| Complex64::new((-grid.k_squared(flat)).powi(p as i32), 0.0));
}

/// ∫_Ω f dx as mean × |Ω|; exact for band-limited integrands.
pub fn integrate(f: &ScalarField) -> f64 {
    f.mean() * f.grid.volume()
}

/// ∫_Ω f g dx.
pub fn inner(f: &ScalarField, g: &ScalarField) -> f64 {
    let s: f64 = f.values.iter().zip(&g.values).map(|(a, b)| a * b).sum();
    s / f.values.len() as f64 * f.grid.volume()
}

/// ∫_Ω a·b dx for vector fields.
pub fn inner_vec(a: &VectorField, b: &VectorField) -> f64 {
    a.components
        .iter()
        .zip(&b.components)
        .map(|(x, y)| inner(x, y))
        .sum()
}

/// |Ω| Σ_k f̂(k) conj(ĝ(k)), the Parseval side of [`inner`].
pub fn spectral_inner(f: &SpectralCoeffs, g: &SpectralCoeffs) -> f64 {
    let s: f64 = f.data.iter().zip(&g.data).map(|(a, b)| (a * b.conj()).re).sum();
    s * f.grid.volume()
}

/// Zero every mode outside the two-thirds box.
pub fn dealias(c: &SpectralCoeffs) -> SpectralCoeffs {
    let mut out = c.clone();
    dealias_in_place(&mut out);
    out
}

pub(crate) fn dealias_in_place(c: &mut SpectralCoeffs) {
    let grid = c.grid;
    for (i, z) in c.data.iter_mut().enumerate() {
        if !grid.keeps(i) {
            *z = Complex64::new(0.0, 0.0);
        }
    }
}

/// Orthogonal projection onto the dealiased subspace.
pub fn project(f: &ScalarField) -> ScalarField {
    let mut c = forward_unchecked(f);
    dealias_in_place(&mut c);
    inverse_unchecked(&c)
}

/// Dealiased product P(f g).
pub fn product(f: &ScalarField, g: &ScalarField) -> ScalarField {
    project(&f.pointwise_mul(g))
}

/// ∇f, computed with one forward transform.
pub fn gradient(f: &ScalarField) -> VectorField {
    let c = forward_unchecked(f);
    gradient_of_coeffs(&c)
}

pub(crate) fn gradient_of_coeffs(c: &SpectralCoeffs) -> VectorField {
    VectorField::from_components(
        (0..c.grid.dim())
            .map(|a| {
                let mut ca = c.clone();
                differentiate_coeffs(&mut ca, a, 1);
                inverse_unchecked(&ca)
            })
            .collect(),
    )
}

/// Second derivative ∂_a ∂_b f.
pub fn mixed_second(f: &ScalarField, a: usize, b: usize) -> Result<ScalarField> {
    check_axis(&f.grid, a)?;
    check_axis(&f.grid, b)?;
    let mut c = forward(f)?;
    if a == b {
        differentiate_coeffs(&mut c, a, 2);
    } else {
        differentiate_coeffs(&mut c, a, 1);
        differentiate_coeffs(&mut c, b, 1);
    }
    Ok(inverse_unchecked(&c))
}

/// Hessian as a row-major d×d list of fields.
pub fn hessian(f: &ScalarField) -> Vec<ScalarField> {
    let c = forward_unchecked(f);
    let d = f.grid.dim();
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        for b in 0..d {
            let mut cc = c.clone();
            if a == b {
                differentiate_coeffs(&mut cc, a, 2);
            } else {
                differentiate_coeffs(&mut cc, a, 1);
                differentiate_coeffs(&mut cc, b, 1);
            }
            out.push(inverse_unchecked(&cc));
        }
    }
    out
}

/// div v.
pub fn divergence(v: &VectorField) -> ScalarField {
    let g = *v.grid();
    let mut acc = SpectralCoeffs::zeros(g);
    for (a, comp) in v.components.iter().enumerate() {
        let mut c = forward_unchecked(comp);
        differentiate_coeffs(&mut c, a, 1);
        for (x, y) in acc.data.iter_mut().zip(&c.data) {
            *x += y;
        }
    }
    inverse_unchecked(&acc)
}

/// Δf.
pub fn laplacian(f: &ScalarField) -> ScalarField {
    let mut c = forward_unchecked(f);
    laplacian_power_coeffs(&mut c, 1);
    inverse_unchecked(&c)
}

/// Componentwise Δ for vector fields.
pub fn vector_laplacian(v: &VectorField) -> VectorField {
    v.map_components(laplacian)
}

/// Full velocity gradient, entry `[i*d + j]` = ∂_j v_i.
pub fn jacobian(v: &VectorField) -> Vec<ScalarField> {
    let d = v.dim();
    let mut out = Vec::with_capacity(d * d);
    for comp in &v.components {
        let g = gradient(comp);
        out.extend(g.components);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g1(n: usize) -> PeriodicGrid {
        PeriodicGrid::with_default_length(1, n).unwrap()
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(PeriodicGrid::new(0, 16, 1.0).is_err());
        assert!(PeriodicGrid::new(4, 16, 1.0).is_err());
        assert!(PeriodicGrid::new(1, 6, 1.0).is_err());
        assert!(PeriodicGrid::new(1, 17, 1.0).is_err());
        assert!(PeriodicGrid::new(1, 16, 0.0).is_err());
    }

    #[test]
    fn ravel_roundtrip() {
        let g = PeriodicGrid::with_default_length(3, 8).unwrap();
        for i in 0..g.len() {
            let idx = g.unravel(i);
            assert_eq!(g.ravel(&idx), i);
        }
    }

    #[test]
    fn cutoff_is_strict() {
        assert_eq!(g1(64).dealias_cutoff(), 21);
        assert_eq!(g1(48).dealias_cutoff(), 15);
        assert!(!g1(48).keeps_mode(16));
    }

    #[test]
    fn constant_transform() {
        let f = ScalarField::constant(g1(16), 3.5);
        let c = forward(&f).unwrap();
        assert!((c.get(&[0]).re - 3.5).abs() < 1e-15);
        assert!(c.data().iter().skip(1).all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn nonfinite_rejected() {
        let mut v = vec![0.0; 16];
        v[3] = f64::NAN;
        assert!(ScalarField::new(g1(16), v).is_err());
    }

    #[test]
    fn nonhermitian_rejected() {
        let mut c = SpectralCoeffs::zeros(g1(16));
        c.set(&[1], Complex64::new(1.0, 0.0));
        assert!(matches!(inverse(&c), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn nyquist_dropped_by_first_derivative() {
        let g = g1(16);
        let f = ScalarField::from_fn(g, |x| (8.0 * x[0]).cos());
        let d = derivative(&f, 0, 1).unwrap();
        assert!(d.max_abs() < 1e-12);
    }
}
