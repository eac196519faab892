use std::f64::consts::PI;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result, Violation};
use crate::functionals::{self, ModelParams};
use crate::galerkin::{ordered_modes, GalerkinBasis};
use crate::profiles::{DensityProfile, VelocityProfile};
use crate::spectral::PeriodicGrid;

/// Prefix of environment variables that override config fields.
/// `QNSD_PARAMS__KAPPA=0.01` sets `params.kappa`.
pub const ENV_PREFIX: &str = "QNSD_";

fn two_pi() -> f64 {
    2.0 * PI
}

fn default_nu() -> f64 {
    1e-3
}

fn default_stride() -> usize {
    10
}

fn default_tol() -> f64 {
    1e-10
}

fn default_max_iter() -> usize {
    50
}

fn default_retries() -> u32 {
    8
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub dim: usize,
    pub n: usize,
    #[serde(default = "two_pi")]
    pub length: f64,
}

impl GridSpec {
    pub fn build(&self) -> Result<PeriodicGrid> {
        PeriodicGrid::new(self.dim, self.n, self.length)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PicardSpec {
    #[serde(default = "default_tol")]
    pub tol: f64,
    #[serde(default = "default_max_iter")]
    pub max_iter: usize,
    /// How many times an interval may be halved after a rejected step.
    #[serde(default = "default_retries")]
    pub retry_budget: u32,
}

impl Default for PicardSpec {
    fn default() -> Self {
        Self {
            tol: default_tol(),
            max_iter: default_max_iter(),
            retry_budget: default_retries(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialData {
    pub density: DensityProfile,
    #[serde(default)]
    pub velocity: VelocityProfile,
}

/// One simulation, fully specified.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub grid: GridSpec,
    pub params: ModelParams,
    pub n_modes: usize,
    pub dt: f64,
    pub t_final: f64,
    pub initial: InitialData,
    /// Lower bound ν for the lifted initial density.
    #[serde(default = "default_nu")]
    pub nu: f64,
    #[serde(default = "default_stride")]
    pub snapshot_stride: usize,
    #[serde(default)]
    pub strict: bool,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub picard: PicardSpec,
    /// Attach a BD entropy breakdown every this many steps; 0 disables it.
    #[serde(default)]
    pub bd_stride: usize,
}

impl RunConfig {
    /// Every invariant violation, tagged with its field path.
    pub fn violations(&self) -> Vec<Violation> {
        let mut v = Vec::new();
        let grid = match self.grid.build() {
            Ok(g) => Some(g),
            Err(e) => {
                v.push(Violation::new("grid", e.to_string()));
                None
            }
        };
        for (field, msg) in self.params.violations() {
            v.push(Violation::new(format!("params.{field}"), msg));
        }
        if let Some(g) = grid {
            let available = ordered_modes(&g).len();
            if self.n_modes == 0 || self.n_modes > available {
                v.push(Violation::new(
                    "n_modes",
                    format!("must lie in 1..={available} for this grid"),
                ));
            }
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            v.push(Violation::new("dt", "dt > 0 is required"));
        }
        if !(self.t_final.is_finite() && self.t_final > 0.0) {
            v.push(Violation::new("t_final", "T > 0 is required"));
        }
        if !(self.nu.is_finite() && self.nu > 0.0) {
            v.push(Violation::new("nu", "ν > 0 is required"));
        }
        if self.snapshot_stride == 0 {
            v.push(Violation::new("snapshot_stride", "must be >= 1"));
        }
        if !(self.picard.tol.is_finite() && self.picard.tol > 0.0) {
            v.push(Violation::new("picard.tol", "must be > 0"));
        }
        if self.picard.max_iter == 0 {
            v.push(Violation::new("picard.max_iter", "must be >= 1"));
        }
        if v.is_empty() {
            if let Err(e) = self.check_initial_data() {
                v.push(Violation::new("initial", e.to_string()));
            }
        }
        v
    }

    fn check_initial_data(&self) -> Result<()> {
        let grid = self.grid.build()?;
        let basis = GalerkinBasis::new(grid, self.n_modes)?;
        let rho0 = self.initial.density.build(&grid, self.nu, self.seed)?;
        let (lambda, _) = self.initial.velocity.build(&basis, &rho0)?;
        let u0 = basis.reconstruct(&lambda);
        let e = functionals::energy(&rho0, &u0, &self.params)?;
        let lm = functionals::log_minus_mass(&rho0)?;
        if !(e.total.is_finite() && lm.is_finite()) {
            return Err(Error::InvalidArgument(
                "initial energy or log-minus integral is not finite".into(),
            ));
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        let v = self.violations();
        if v.is_empty() {
            Ok(())
        } else {
            Err(Error::Config(v))
        }
    }

    /// Number of output steps, the last one clipped to land on `t_final`.
    pub fn n_steps(&self) -> usize {
        ((self.t_final / self.dt) * (1.0 - 1e-12)).ceil().max(1.0) as usize
    }
}

/// Parse and validate a JSON config document.
pub fn parse_config(text: &str) -> Result<RunConfig> {
    let value: Value = serde_json::from_str(text)
        .map_err(|e| Error::Config(vec![Violation::new("", format!("malformed document: {e}"))]))?;
    config_from_value(value)
}

pub fn config_from_value(value: Value) -> Result<RunConfig> {
    let cfg: RunConfig = serde_json::from_value(value)
        .map_err(|e| Error::Config(vec![Violation::new("", e.to_string())]))?;
    cfg.validate()?;
    Ok(cfg)
}

/// Apply `QNSD_A__B=value` overrides to a config document. Values are parsed
/// as JSON when possible and kept as strings otherwise.
pub fn apply_env_overrides<I>(value: &mut Value, vars: I) -> Result<Vec<String>>
where
    I: IntoIterator<Item = (String, String)>,
{
    let mut applied = Vec::new();
    let mut vars: Vec<(String, String)> = vars
        .into_iter()
        .filter(|(k, _)| k.starts_with(ENV_PREFIX))
        .collect();
    vars.sort();
    for (key, raw) in vars {
        let path: Vec<String> = key[ENV_PREFIX.len()..]
            .split("__")
            .map(|s| s.to_ascii_lowercase())
            .collect();
        if path.iter().any(|p| p.is_empty()) {
            return Err(Error::Config(vec![Violation::new(key, "empty path segment")]));
        }
        let new = serde_json::from_str(&raw).unwrap_or(Value::String(raw.clone()));
        let mut cur = &mut *value;
        for seg in &path[..path.len() - 1] {
            if !cur.is_object() {
                return Err(Error::Config(vec![Violation::new(
                    path.join("."),
                    "override traverses a non-object value",
                )]));
            }
            cur = cur
                .as_object_mut()
                .expect("checked object")
                .entry(seg.clone())
                .or_insert_with(|| Value::Object(Default::default()));
        }
        match cur.as_object_mut() {
            Some(obj) => {
                obj.insert(path[path.len() - 1].clone(), new);
            }
            None => {
                return Err(Error::Config(vec![Violation::new(
                    path.join("."),
                    "override traverses a non-object value",
                )]))
            }
        }
        applied.push(path.join("."));
    }
    Ok(applied)
}
