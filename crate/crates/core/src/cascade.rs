//! Parameter sweeps along the regularization cascade and the convergence
//! metrics the limit passages rely on.
//!
//! Space-time integrals use the trapezoid rule over a run's snapshots (or its
//! per-step records where those carry the needed quantity). Member runs of a
//! sweep are independent and execute concurrently; tables are assembled in
//! parameter order so the result does not depend on scheduling.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::diagnostics::config::RunConfig;
use crate::error::{Error, Result};
use crate::functionals::{self, kappa_bound_densities, HYPER_POWER};
use crate::galerkin::{self, GalerkinBasis, Trajectory, WeakTerms};
use crate::spectral::{self, PeriodicGrid, ScalarField, VectorField};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntryStatus {
    Completed,
    Aborted,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepEntry {
    pub value: f64,
    pub status: EntryStatus,
    pub run_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub metrics: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepTable {
    pub parameter: String,
    pub values: Vec<f64>,
    pub entries: Vec<SweepEntry>,
}

impl SweepTable {
    /// Metric values in parameter order; `None` where the entry failed or
    /// lacks the metric.
    pub fn metric(&self, name: &str) -> Vec<Option<f64>> {
        self.entries
            .iter()
            .map(|e| match e.status {
                EntryStatus::Failed => None,
                _ => e.metrics.get(name).copied(),
            })
            .collect()
    }

    /// Metric values, or an error naming the first entry without one.
    pub fn metric_values(&self, name: &str) -> Result<Vec<f64>> {
        self.metric(name)
            .into_iter()
            .zip(&self.entries)
            .map(|(m, e)| {
                m.ok_or_else(|| {
                    Error::InvalidArgument(format!(
                        "entry {}={} has no metric {name}",
                        self.parameter, e.value
                    ))
                })
            })
            .collect()
    }
}

/// Every step is at most `(1 + slack)` times its predecessor.
pub fn nonincreasing_within(values: &[f64], slack: f64) -> bool {
    values.windows(2).all(|w| w[1] <= w[0] * (1.0 + slack) + 1e-300)
}

pub fn strictly_decreasing(values: &[f64]) -> bool {
    values.windows(2).all(|w| w[1] < w[0])
}

fn check_decreasing_to_zero(values: &[f64]) -> Result<()> {
    if values.is_empty() {
        return Err(Error::InvalidArgument("sweep needs at least one value".into()));
    }
    if values.iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
        return Err(Error::InvalidArgument("sweep values must be finite and >= 0".into()));
    }
    if !strictly_decreasing(values) {
        return Err(Error::InvalidArgument(
            "sweep values must be strictly decreasing toward 0".into(),
        ));
    }
    Ok(())
}

fn trapezoid(times: &[f64], vals: &[f64]) -> f64 {
    times
        .windows(2)
        .zip(vals.windows(2))
        .map(|(t, v)| 0.5 * (t[1] - t[0]) * (v[0] + v[1]))
        .sum()
}

fn snapshot_times(run: &Trajectory) -> Vec<f64> {
    run.snapshots.iter().map(|s| s.time).collect()
}

/// The standard family of test fields: the first eight vector modes of the
/// trigonometric basis plus a steep periodic bump in component 0.
pub fn test_battery(grid: &PeriodicGrid) -> Result<Vec<VectorField>> {
    let basis = GalerkinBasis::new(*grid, 8.min(galerkin::ordered_modes(grid).len()))?;
    let mut out: Vec<VectorField> = (0..basis.len()).map(|i| basis.mode_field(i)).collect();
    let k0 = grid.k0();
    let bump = spectral::project(&ScalarField::from_fn(*grid, |x| {
        (8.0 * x.iter().map(|xi| (k0 * xi - std::f64::consts::PI).cos() - 1.0).sum::<f64>()).exp()
    }));
    let d = grid.dim();
    out.push(VectorField::from_components(
        (0..d)
            .map(|c| if c == 0 { bump.clone() } else { ScalarField::zeros(*grid) })
            .collect(),
    ));
    Ok(out)
}

/// ‖√ρ_a u_a − √ρ_b u_b‖ in L²(0,T; L²(Ω)) over matching snapshots.
pub fn sqrtrho_u_distance(a: &Trajectory, b: &Trajectory) -> Result<f64> {
    if a.grid != b.grid {
        return Err(Error::GridMismatch);
    }
    let ta = snapshot_times(a);
    let tb = snapshot_times(b);
    if ta.len() != tb.len() || ta.iter().zip(&tb).any(|(x, y)| (x - y).abs() > 1e-12 * (1.0 + x.abs())) {
        return Err(Error::InvalidArgument(
            "runs must share their snapshot times".into(),
        ));
    }
    let vals: Vec<f64> = a
        .snapshots
        .iter()
        .zip(&b.snapshots)
        .map(|(sa, sb)| {
            let wa = sa.velocity(&a.basis).scale_by(&sa.rho.map(f64::sqrt));
            let wb = sb.velocity(&b.basis).scale_by(&sb.rho.map(f64::sqrt));
            let diff = wa.sub(&wb);
            spectral::inner_vec(&diff, &diff)
        })
        .collect();
    Ok(trapezoid(&ta, &vals).max(0.0).sqrt())
}

/// η ∫₀ᵀ∫ ρ⁻¹⁰ dx dt from the per-step records.
pub fn eta_vanishing_metric(run: &Trajectory) -> f64 {
    let eta = run.config.params.eta;
    if eta == 0.0 {
        return 0.0;
    }
    // the cold energy is (η/11)∫ρ⁻¹⁰
    let times: Vec<f64> = run.records.iter().map(|r| r.time).collect();
    let vals: Vec<f64> = run
        .records
        .iter()
        .map(|r| r.energy.cold * (functionals::COLD_EXPONENT + 1) as f64)
        .collect();
    trapezoid(&times, &vals)
}

/// max over φ of |δ ∫₀ᵀ∫ ρ∇Δ⁹ρ·φ dx dt|.
pub fn delta_vanishing_metric(run: &Trajectory, testfields: &[VectorField]) -> Result<f64> {
    let delta = run.config.params.delta;
    if delta == 0.0 {
        return Ok(0.0);
    }
    check_fields(&run.grid, testfields)?;
    let times = snapshot_times(run);
    let forces: Vec<VectorField> = run
        .snapshots
        .iter()
        .map(|s| {
            let mut c = spectral::forward_unchecked(&s.rho);
            spectral::dealias_in_place(&mut c);
            spectral::laplacian_power_coeffs(&mut c, HYPER_POWER);
            spectral::gradient_of_coeffs(&c).scale_by(&s.rho)
        })
        .collect();
    let mut worst: f64 = 0.0;
    for phi in testfields {
        let vals: Vec<f64> = forces.iter().map(|f| spectral::inner_vec(f, phi)).collect();
        worst = worst.max((delta * trapezoid(&times, &vals)).abs());
    }
    Ok(worst)
}

fn check_fields(grid: &PeriodicGrid, fields: &[VectorField]) -> Result<()> {
    if fields.iter().any(|f| f.grid() != grid) {
        return Err(Error::GridMismatch);
    }
    Ok(())
}

/// Time-integrated weak momentum residual
/// [∫ρu·φ]₀ᵀ − ∫₀ᵀ ⟨𝔑(ρ,u), φ⟩ dt for each test field, with the pairing taken
/// with the run's own coefficients (so it is the weak form including both
/// Bohm integrals when the regularizations vanish). Each residual is divided
/// by max(1, sum of the magnitudes of its terms); the largest is returned.
pub fn weak_residual(run: &Trajectory, testfields: &[VectorField]) -> Result<f64> {
    check_fields(&run.grid, testfields)?;
    if run.snapshots.len() < 2 {
        return Ok(0.0);
    }
    let p = run.config.params;
    let times = snapshot_times(run);
    let states: Vec<(ScalarField, VectorField)> = run
        .snapshots
        .iter()
        .map(|s| (s.rho.clone(), s.velocity(&run.basis)))
        .collect();
    let terms: Vec<WeakTerms> = states.iter().map(|(r, u)| WeakTerms::new(r, u, &p)).collect();
    let mut worst: f64 = 0.0;
    for phi in testfields {
        let (first, last) = (&states[0], &states[states.len() - 1]);
        let m0 = spectral::inner_vec(&first.1.scale_by(&first.0), phi);
        let m1 = spectral::inner_vec(&last.1.scale_by(&last.0), phi);
        let (vals, mags): (Vec<f64>, Vec<f64>) = terms.iter().map(|t| t.pair_field(phi)).unzip();
        let flux = trapezoid(&times, &vals);
        let scale = m0.abs() + m1.abs() + trapezoid(&times, &mags);
        worst = worst.max((m1 - m0 - flux).abs() / scale.max(1.0));
    }
    Ok(worst)
}

/// ∫ρu·ψ at every snapshot, the integral averages whose time continuity is
/// the finite-dimensional shadow of ρu ∈ C([0,T]; L^{3/2}_weak).
pub fn momentum_average_series(run: &Trajectory, psi: &VectorField) -> Result<Vec<(f64, f64)>> {
    check_fields(&run.grid, std::slice::from_ref(psi))?;
    Ok(run
        .snapshots
        .iter()
        .map(|s| {
            let m = s.velocity(&run.basis).scale_by(&s.rho);
            (s.time, spectral::inner_vec(&m, psi))
        })
        .collect())
}

/// κ^{1/2}‖√ρ‖_{L²(0,T;H²)} and κ^{1/4}‖∇ρ^{1/4}‖_{L⁴(0,T;L⁴)}.
pub fn kappa_bound_quantities(run: &Trajectory) -> (f64, f64) {
    let kappa = run.config.params.kappa;
    let times = snapshot_times(run);
    let (h2, l4): (Vec<f64>, Vec<f64>) = run
        .snapshots
        .iter()
        .map(|s| kappa_bound_densities(&s.rho))
        .unzip();
    (
        kappa.sqrt() * trapezoid(&times, &h2).max(0.0).sqrt(),
        kappa.powf(0.25) * trapezoid(&times, &l4).max(0.0).powf(0.25),
    )
}

/// ∫₀ᵀ (|R₁| + |R₂| + |R₃| + |R₄|) dt over the snapshots.
pub fn bd_remainder_metric(run: &Trajectory) -> Result<f64> {
    let p = run.config.params;
    let times = snapshot_times(run);
    let vals = run
        .snapshots
        .iter()
        .map(|s| {
            let bd = functionals::bd_entropy(&s.rho, &s.velocity(&run.basis), &p)?;
            Ok(bd.remainders[..4].iter().map(|r| r.abs()).sum())
        })
        .collect::<Result<Vec<f64>>>()?;
    Ok(trapezoid(&times, &vals))
}

fn status_of(run: &Trajectory) -> (EntryStatus, Option<String>) {
    match &run.outcome {
        galerkin::RunOutcome::Completed => (EntryStatus::Completed, None),
        galerkin::RunOutcome::Aborted { time, reason } => {
            (EntryStatus::Aborted, Some(format!("aborted at t={time}: {reason}")))
        }
    }
}

/// Run `base` once per value with `set` applied, in parallel, and tabulate
/// `measure` for each completed run.
pub fn sweep<S, M>(
    base: &RunConfig,
    parameter: &str,
    values: &[f64],
    set: S,
    measure: M,
) -> Result<SweepTable>
where
    S: Fn(&mut RunConfig, f64) + Sync,
    M: Fn(&Trajectory) -> Result<BTreeMap<String, f64>> + Sync,
{
    check_decreasing_to_zero(values)?;
    Ok(run_entries(base, parameter, values, set, measure))
}

fn run_entries<S, M>(base: &RunConfig, parameter: &str, values: &[f64], set: S, measure: M) -> SweepTable
where
    S: Fn(&mut RunConfig, f64) + Sync,
    M: Fn(&Trajectory) -> Result<BTreeMap<String, f64>> + Sync,
{
    let entries: Vec<SweepEntry> = values
        .par_iter()
        .enumerate()
        .map(|(i, &v)| {
            let mut cfg = base.clone();
            set(&mut cfg, v);
            let run_id = format!("{parameter}-{i:02}");
            let failed = |reason: String| SweepEntry {
                value: v,
                status: EntryStatus::Failed,
                run_id: run_id.clone(),
                reason: Some(reason),
                metrics: BTreeMap::new(),
            };
            let traj = match galerkin::run(&cfg) {
                Ok(t) => t,
                Err(e) => return failed(e.to_string()),
            };
            let (status, reason) = status_of(&traj);
            if status != EntryStatus::Completed {
                return SweepEntry {
                    value: v,
                    status,
                    run_id,
                    reason,
                    metrics: BTreeMap::new(),
                };
            }
            match measure(&traj) {
                Ok(metrics) => SweepEntry {
                    value: v,
                    status,
                    run_id,
                    reason,
                    metrics,
                },
                Err(e) => failed(e.to_string()),
            }
        })
        .collect();
    SweepTable {
        parameter: parameter.to_string(),
        values: values.to_vec(),
        entries,
    }
}

/// η → 0 with every other setting fixed; metric `eta_metric`.
pub fn eta_sweep(base: &RunConfig, etas: &[f64]) -> Result<SweepTable> {
    sweep(
        base,
        "eta",
        etas,
        |c, v| c.params.eta = v,
        |t| Ok(BTreeMap::from([("eta_metric".to_string(), eta_vanishing_metric(t))])),
    )
}

/// δ → 0 with every other setting fixed; metric `delta_metric` over the
/// standard test battery.
pub fn delta_sweep(base: &RunConfig, deltas: &[f64]) -> Result<SweepTable> {
    sweep(
        base,
        "delta",
        deltas,
        |c, v| c.params.delta = v,
        |t| {
            let battery = test_battery(&t.grid)?;
            Ok(BTreeMap::from([(
                "delta_metric".to_string(),
                delta_vanishing_metric(t, &battery)?,
            )]))
        },
    )
}

/// ε = μ → 0 together; metric `bd_remainders` (time-integrated |R₁|+…+|R₄|)
/// and the weak residual over the test battery.
pub fn epsilon_mu_sweep(base: &RunConfig, values: &[f64]) -> Result<SweepTable> {
    sweep(
        base,
        "epsilon_mu",
        values,
        |c, v| {
            c.params.epsilon = v;
            c.params.mu = v;
        },
        |t| {
            let battery = test_battery(&t.grid)?;
            Ok(BTreeMap::from([
                ("bd_remainders".to_string(), bd_remainder_metric(t)?),
                ("weak_residual".to_string(), weak_residual(t, &battery)?),
            ]))
        },
    )
}

/// κ → 0 against a κ = 0 reference. Metrics per entry: `distance` (the
/// √ρu distance to the reference), `kappa_h2` and `kappa_l4`.
pub fn kappa_limit_study(base: &RunConfig, kappas: &[f64]) -> Result<SweepTable> {
    check_decreasing_to_zero(kappas)?;
    if kappas.last() == Some(&0.0) {
        return Err(Error::InvalidArgument(
            "the κ = 0 reference run is added automatically".into(),
        ));
    }
    let mut reference_cfg = base.clone();
    reference_cfg.params.kappa = 0.0;
    let reference = galerkin::run(&reference_cfg)?;
    if !reference.completed() {
        return Err(Error::InvalidArgument(format!(
            "κ = 0 reference run did not complete: {:?}",
            reference.outcome
        )));
    }
    sweep(
        base,
        "kappa",
        kappas,
        |c, v| c.params.kappa = v,
        |t| {
            let (h2, l4) = kappa_bound_quantities(t);
            Ok(BTreeMap::from([
                ("distance".to_string(), sqrtrho_u_distance(t, &reference)?),
                ("kappa_h2".to_string(), h2),
                ("kappa_l4".to_string(), l4),
            ]))
        },
    )
}

fn weak_residual_metric(t: &Trajectory) -> Result<BTreeMap<String, f64>> {
    let battery = test_battery(&t.grid)?;
    Ok(BTreeMap::from([("weak_residual".to_string(), weak_residual(t, &battery)?)]))
}

/// Weak residual over the test battery as dt shrinks; metric `weak_residual`.
pub fn dt_refinement(base: &RunConfig, dts: &[f64]) -> Result<SweepTable> {
    sweep(base, "dt", dts, |c, v| c.dt = v, weak_residual_metric)
}

/// Weak residual over the test battery as the Galerkin dimension grows;
/// metric `weak_residual`.
pub fn mode_refinement(base: &RunConfig, n_modes: &[usize]) -> Result<SweepTable> {
    if n_modes.is_empty() || n_modes.windows(2).any(|w| w[1] <= w[0]) || n_modes[0] == 0 {
        return Err(Error::InvalidArgument(
            "mode counts must be positive and strictly increasing".into(),
        ));
    }
    let values: Vec<f64> = n_modes.iter().map(|&n| n as f64).collect();
    Ok(run_entries(
        base,
        "n_modes",
        &values,
        |c, v| c.n_modes = v as usize,
        weak_residual_metric,
    ))
}

/// The κ-uniform bound check: every value stays below `1.05 ×` the value at
/// the largest κ.
pub fn uniformly_bounded(values: &[f64]) -> bool {
    match values.first() {
        Some(&first) => values.iter().all(|&v| v <= 1.05 * first),
        None => true,
    }
}
