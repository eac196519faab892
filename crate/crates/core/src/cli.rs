//! The `qns` command line: `simulate`, `verify`, `sweep` and `report`.
//!
//! Exit status is 0 on success, 1 when a run aborts, a check fails or any
//! error occurs, and 2 on a usage error. Errors go to stderr as one JSON
//! object `{"error": kind, "message": ..., "violations": [...]}`. Outputs
//! written before a failure are left in place.

use std::fs::{self, File};
use std::io::{BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::cascade::{self, SweepTable};
use crate::diagnostics::config::{apply_env_overrides, config_from_value, RunConfig};
use crate::diagnostics::records::{read_records, write_record};
use crate::diagnostics::report::{energy_csv, sweep_csv};
use crate::diagnostics::verify::verify_battery;
use crate::error::{Error, Result};
use crate::galerkin::{self, RunOutcome};

#[derive(Debug, Parser)]
#[command(name = "qns", version, about = "Regularized quantum Navier-Stokes solver and estimate checker")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Study {
    Eta,
    Delta,
    EpsilonMu,
    Kappa,
    Dt,
    NModes,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Integrate one config, streaming records to OUT/records.jsonl.
    Simulate {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        strict: bool,
    },
    /// Inequality and identity battery over seeded random densities.
    Verify {
        #[arg(long, default_value_t = 100)]
        checks: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// One cascade study; writes OUT/sweep_<study>.json and .csv.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long, value_enum)]
        study: Study,
        /// Comma-separated parameter values (mode counts for n-modes).
        #[arg(long, value_delimiter = ',', required = true)]
        values: Vec<f64>,
        #[arg(long, default_value = "out")]
        out: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        strict: bool,
    },
    /// CSV plot data from a record stream (.jsonl) or a sweep table (.json).
    Report {
        input: PathBuf,
        /// Destination file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Parse `args` (program name first) and run, reading overrides from the
/// process environment.
pub fn run_cli<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli_with(args, std::env::vars(), &mut stdout.lock(), &mut stderr.lock())
}

/// As [`run_cli`] with explicit environment and output streams.
pub fn run_cli_with<I, S>(
    args: I,
    env: impl IntoIterator<Item = (String, String)>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = if code == 0 {
                write!(out, "{}", e.render())
            } else {
                write!(err, "{}", e.render())
            };
            return code;
        }
    };
    let env: Vec<(String, String)> = env.into_iter().collect();
    match dispatch(cli.command, &env, out) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "{}", error_json(&e));
            1
        }
    }
}

/// Machine-readable form of an error.
pub fn error_json(e: &Error) -> Value {
    let violations = match e {
        Error::Config(v) => serde_json::to_value(v).unwrap_or(Value::Null),
        _ => json!([]),
    };
    json!({"error": e.kind(), "message": e.to_string(), "violations": violations})
}

/// Read a config, apply environment overrides and CLI flags, validate.
pub fn load_config(
    path: &Path,
    env: &[(String, String)],
    seed: Option<u64>,
    strict: bool,
) -> Result<RunConfig> {
    let text = fs::read_to_string(path)?;
    let mut value: Value = serde_json::from_str(&text).map_err(|e| {
        Error::Config(vec![crate::error::Violation::new("", format!("malformed document: {e}"))])
    })?;
    apply_env_overrides(&mut value, env.iter().cloned())?;
    if let Some(obj) = value.as_object_mut() {
        if let Some(s) = seed {
            obj.insert("seed".into(), json!(s));
        }
        if strict {
            obj.insert("strict".into(), json!(true));
        }
    }
    config_from_value(value)
}

fn dispatch(cmd: Command, env: &[(String, String)], out: &mut dyn Write) -> Result<i32> {
    match cmd {
        Command::Simulate {
            config,
            out: dir,
            seed,
            strict,
        } => simulate(&load_config(&config, env, seed, strict)?, &dir, out),
        Command::Verify {
            checks,
            seed,
            out: dir,
        } => {
            let report = verify_battery(checks, seed)?;
            for c in &report.checks {
                writeln!(
                    out,
                    "[{}] {} worst={:e} threshold={:e} ({})",
                    if c.passed { "PASS" } else { "FAIL" },
                    c.name,
                    c.worst,
                    c.threshold,
                    c.worst_field
                )?;
            }
            if let Some(dir) = dir {
                fs::create_dir_all(&dir)?;
                fs::write(dir.join("verify.json"), serde_json::to_string_pretty(&report)?)?;
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Sweep {
            config,
            study,
            values,
            out: dir,
            seed,
            strict,
        } => {
            let cfg = load_config(&config, env, seed, strict)?;
            let table = run_study(&cfg, study, &values)?;
            let name = study
                .to_possible_value()
                .map(|v| v.get_name().replace('-', "_"))
                .unwrap_or_default();
            fs::create_dir_all(&dir)?;
            fs::write(
                dir.join(format!("sweep_{name}.json")),
                serde_json::to_string_pretty(&table)?,
            )?;
            let csv = sweep_csv(&table)?;
            fs::write(dir.join(format!("sweep_{name}.csv")), &csv)?;
            out.write_all(csv.as_bytes())?;
            let all_ok = table
                .entries
                .iter()
                .all(|e| e.status == cascade::EntryStatus::Completed);
            Ok(if all_ok { 0 } else { 1 })
        }
        Command::Report { input, out: dest } => {
            let csv = report(&input)?;
            match dest {
                Some(p) => fs::write(p, csv)?,
                None => out.write_all(csv.as_bytes())?,
            }
            Ok(0)
        }
    }
}

fn simulate(cfg: &RunConfig, dir: &Path, out: &mut dyn Write) -> Result<i32> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("config.json"), serde_json::to_string_pretty(cfg)?)?;
    let mut stream = BufWriter::new(File::create(dir.join("records.jsonl"))?);
    let result = galerkin::run_with(cfg, |rec| {
        write_record(&mut stream, rec)?;
        stream.flush()?;
        Ok(())
    });
    stream.flush()?;
    let traj = result?;
    let last = traj.records.last();
    let summary = json!({
        "outcome": traj.outcome,
        "dim": cfg.grid.dim,
        // the analysis is for d = 2, 3; one-dimensional runs only exercise the code
        "test_vehicle": cfg.grid.dim == 1,
        "steps": last.map(|r| r.step),
        "final_time": last.map(|r| r.time),
        "initial_mass": traj.records.first().map(|r| r.mass),
        "final_mass": last.map(|r| r.mass),
        "final_energy": last.map(|r| r.energy.total),
        "initial_projection_defect": traj.initial_projection_defect,
    });
    fs::write(dir.join("summary.json"), serde_json::to_string_pretty(&summary)?)?;
    writeln!(out, "{summary}")?;
    Ok(match traj.outcome {
        RunOutcome::Completed => 0,
        RunOutcome::Aborted { .. } => 1,
    })
}

fn run_study(cfg: &RunConfig, study: Study, values: &[f64]) -> Result<SweepTable> {
    match study {
        Study::Eta => cascade::eta_sweep(cfg, values),
        Study::Delta => cascade::delta_sweep(cfg, values),
        Study::EpsilonMu => cascade::epsilon_mu_sweep(cfg, values),
        Study::Kappa => cascade::kappa_limit_study(cfg, values),
        Study::Dt => cascade::dt_refinement(cfg, values),
        Study::NModes => {
            let ns = values
                .iter()
                .map(|&v| {
                    if v >= 1.0 && v.fract() == 0.0 {
                        Ok(v as usize)
                    } else {
                        Err(Error::InvalidArgument(format!("{v} is not a mode count")))
                    }
                })
                .collect::<Result<Vec<_>>>()?;
            cascade::mode_refinement(cfg, &ns)
        }
    }
}

/// CSV for a record stream or a sweep table, chosen by content.
pub fn report(input: &Path) -> Result<String> {
    let text = fs::read_to_string(input)?;
    if let Ok(table) = serde_json::from_str::<SweepTable>(&text) {
        return sweep_csv(&table);
    }
    let records = read_records(BufReader::new(File::open(input)?))?;
    energy_csv(&records)
}
