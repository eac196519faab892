use serde::{Deserialize, Serialize};

use super::basis::GalerkinBasis;
use super::mass::MassMatrix;
use super::step::{fixed_point_advance, Advance, State};
use crate::diagnostics::config::RunConfig;
use crate::diagnostics::records::DiagnosticsRecord;
use crate::error::{Error, Result};
use crate::functionals::{self, ModelParams};
use crate::spectral::{self, PeriodicGrid, ScalarField, VectorField};

#[derive(Debug, Clone)]
pub struct Snapshot {
    pub step: usize,
    pub time: f64,
    pub rho: ScalarField,
    pub lambda: Vec<f64>,
}

impl Snapshot {
    pub fn velocity(&self, basis: &GalerkinBasis) -> VectorField {
        basis.reconstruct(&self.lambda)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RunOutcome {
    Completed,
    Aborted { time: f64, reason: String },
}

/// Everything a run produced, including a partial trajectory on abort.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub config: RunConfig,
    pub grid: PeriodicGrid,
    pub basis: GalerkinBasis,
    pub records: Vec<DiagnosticsRecord>,
    pub snapshots: Vec<Snapshot>,
    pub outcome: RunOutcome,
    /// L² norm of the part of the configured u₀ outside X_N.
    pub initial_projection_defect: f64,
}

impl Trajectory {
    pub fn completed(&self) -> bool {
        self.outcome == RunOutcome::Completed
    }

    /// E(T) − E(0) + ∫₀ᵀ Σ dissipation dt, time integral by the trapezoid rule.
    /// Zero for an exact solution of the energy balance.
    pub fn energy_balance_defect(&self) -> f64 {
        let (first, last) = match (self.records.first(), self.records.last()) {
            (Some(a), Some(b)) => (a, b),
            _ => return 0.0,
        };
        let mut integral = 0.0;
        for w in self.records.windows(2) {
            integral += 0.5 * (w[1].time - w[0].time) * (w[0].total_dissipation() + w[1].total_dissipation());
        }
        last.energy.total - first.energy.total + integral
    }

    /// Largest per-step energy increase E(t_{n+1}) − E(t_n), or a negative
    /// number when the energy decreased on every step.
    pub fn max_energy_increase(&self) -> f64 {
        self.records
            .windows(2)
            .map(|w| w[1].energy.total - w[0].energy.total)
            .fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Diagnostics for one state.
pub fn diagnose(
    state: &State,
    p: &ModelParams,
    step: usize,
    dt: f64,
    with_bd: bool,
    basis: &GalerkinBasis,
) -> Result<DiagnosticsRecord> {
    let rho = &state.rho;
    Ok(DiagnosticsRecord {
        step,
        time: state.time,
        dt,
        energy: functionals::energy(rho, &state.u, p)?,
        dissipation: functionals::dissipation_rates(rho, &state.u, p)?,
        mass: spectral::integrate(rho),
        min_rho: rho.min(),
        max_rho: rho.max(),
        div_u_max: spectral::divergence(&state.u).max_abs(),
        mass_inverse_norm: MassMatrix::new(rho, basis)?.inverse_norm(),
        picard_iterations: 0,
        picard_residuals: Vec::new(),
        substeps: 0,
        floor_active: rho.min() < p.floor_rho,
        bd: if with_bd {
            Some(functionals::bd_entropy(rho, &state.u, p)?)
        } else {
            None
        },
    })
}

struct IntervalStats {
    iterations: usize,
    residuals: Vec<f64>,
    substeps: usize,
    floor_active: bool,
}

/// Advance over `h`, halving on rejection up to `budget` levels deep.
fn advance_interval(
    state: &State,
    p: &ModelParams,
    basis: &GalerkinBasis,
    h: f64,
    cfg: &RunConfig,
    budget: u32,
) -> Result<(State, IntervalStats)> {
    match fixed_point_advance(state, p, basis, h, cfg.picard.tol, cfg.picard.max_iter) {
        Ok(Advance {
            state: next,
            iterations,
            residuals,
            floor_active,
        }) => Ok((
            next,
            IntervalStats {
                iterations,
                residuals,
                substeps: 1,
                floor_active,
            },
        )),
        Err(Error::StepRejected { .. }) if budget > 0 => {
            let (mid, a) = advance_interval(state, p, basis, 0.5 * h, cfg, budget - 1)?;
            let (mut end, b) = advance_interval(&mid, p, basis, 0.5 * h, cfg, budget - 1)?;
            end.time = state.time + h;
            let (iterations, residuals) = if b.iterations > a.iterations {
                (b.iterations, b.residuals)
            } else {
                (a.iterations, a.residuals)
            };
            Ok((
                end,
                IntervalStats {
                    iterations,
                    residuals,
                    substeps: a.substeps + b.substeps,
                    floor_active: a.floor_active || b.floor_active,
                },
            ))
        }
        Err(e) => Err(e),
    }
}

/// Build ρ₀, λ₀ and the basis from a config.
pub fn initial_state(cfg: &RunConfig) -> Result<(State, GalerkinBasis, f64)> {
    let grid = cfg.grid.build()?;
    let basis = GalerkinBasis::new(grid, cfg.n_modes)?;
    let rho0 = cfg.initial.density.build(&grid, cfg.nu, cfg.seed)?;
    let (lambda, defect) = cfg.initial.velocity.build(&basis, &rho0)?;
    let state = State::new(0.0, rho0, lambda, &basis)?;
    Ok((state, basis, defect))
}

/// Integrate a validated config to `t_final`.
pub fn run(cfg: &RunConfig) -> Result<Trajectory> {
    run_with(cfg, |_| Ok(()))
}

/// As [`run`], handing every record to `sink` as soon as it exists. A sink
/// error aborts the run and is returned.
pub fn run_with(
    cfg: &RunConfig,
    mut sink: impl FnMut(&DiagnosticsRecord) -> Result<()>,
) -> Result<Trajectory> {
    cfg.validate()?;
    let p = cfg.params;
    let (mut state, basis, defect) = initial_state(cfg)?;
    let grid = *basis.grid();
    let bd_due = |step: usize| cfg.bd_stride > 0 && step.is_multiple_of(cfg.bd_stride);

    let rec0 = diagnose(&state, &p, 0, 0.0, bd_due(0), &basis)?;
    sink(&rec0)?;
    let mut records = vec![rec0];
    let mut snapshots = vec![Snapshot {
        step: 0,
        time: 0.0,
        rho: state.rho.clone(),
        lambda: state.lambda.clone(),
    }];
    let n_steps = cfg.n_steps();
    let mut outcome = RunOutcome::Completed;

    for step in 1..=n_steps {
        let t_target = if step == n_steps {
            cfg.t_final
        } else {
            step as f64 * cfg.dt
        };
        let h = t_target - state.time;
        let (next, stats) = match advance_interval(&state, &p, &basis, h, cfg, cfg.picard.retry_budget) {
            Ok(x) => x,
            Err(Error::StepRejected { reason, .. }) => {
                outcome = RunOutcome::Aborted {
                    time: state.time,
                    reason,
                };
                break;
            }
            Err(e) => return Err(e),
        };
        state = next;
        state.time = t_target;
        let mut rec = diagnose(&state, &p, step, h, bd_due(step), &basis)?;
        rec.picard_iterations = stats.iterations;
        rec.picard_residuals = stats.residuals;
        rec.substeps = stats.substeps;
        rec.floor_active = stats.floor_active;
        sink(&rec)?;
        records.push(rec);
        if step % cfg.snapshot_stride == 0 || step == n_steps {
            snapshots.push(Snapshot {
                step,
                time: state.time,
                rho: state.rho.clone(),
                lambda: state.lambda.clone(),
            });
        }
        if cfg.strict && stats.floor_active {
            outcome = RunOutcome::Aborted {
                time: state.time,
                reason: format!(
                    "density floor {:e} activated in strict mode",
                    p.floor_rho
                ),
            };
            break;
        }
    }

    Ok(Trajectory {
        config: cfg.clone(),
        grid,
        basis,
        records,
        snapshots,
        outcome,
        initial_projection_defect: defect,
    })
}
