//! Acceptance criteria. One `[PASS]`/`[FAIL]` line per criterion; exits
//! nonzero if any fails.

use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use qns_core::cascade::{
    self, nonincreasing_within, strictly_decreasing, uniformly_bounded, EntryStatus, SweepTable,
};
use qns_core::diagnostics::{parse_config, verify_battery, RunConfig};
use qns_core::galerkin::{run, Trajectory};

const SHIPPED: [&str; 5] = ["standard", "stationary", "near_vacuum", "random_2d", "weak_form"];

/// Slack constant c in E(t_{n+1}) ≤ E(t_n) + c·dt².
const ENERGY_SLACK_C: f64 = 1.0;

fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("configs")
        .join(format!("{name}.json"))
}

fn load(name: &str) -> RunConfig {
    parse_config(&std::fs::read_to_string(config_path(name)).expect("read config")).expect("valid config")
}

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn within(limit: Duration, elapsed: Duration) -> bool {
    elapsed <= limit
}

fn all_completed(t: &SweepTable) -> bool {
    t.entries.iter().all(|e| e.status == EntryStatus::Completed)
}

fn ac1_ac2() -> (Outcome, Outcome) {
    let start = Instant::now();
    let report = verify_battery(100, 7).expect("battery");
    let elapsed = start.elapsed();
    let get = |n: &str| report.checks.iter().find(|c| c.name == n).expect("check present");
    let j = get("jungel_inequalities");
    let b = get("bohm_forms");
    let i = get("ibp_identity");
    let fast = within(Duration::from_secs(60), elapsed);
    (
        outcome(
            j.passed && fast,
            format!(
                "Jüngel inequalities on 2×100 fields: worst (max(A/7,B/8)−D)/(1+D) = {:.3e} (allowed ≤ 1e-9), {elapsed:.2?}",
                j.worst
            ),
        ),
        outcome(
            b.passed && i.passed && fast,
            format!(
                "Bohm forms worst rel L² {:.3e}, IBP worst {:.3e} (both < 1e-6), {elapsed:.2?}",
                b.worst, i.worst
            ),
        ),
    )
}

fn ac3() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for name in SHIPPED {
        let t = run(&load(name)).expect("run");
        let m0 = t.records[0].mass;
        let drift = t
            .records
            .iter()
            .map(|r| ((r.mass - m0) / m0).abs())
            .fold(0.0, f64::max);
        let steps = t.records.len() - 1;
        ok &= t.completed() && steps >= 500 && drift <= 1e-10;
        parts.push(format!("{name}: {steps} steps, drift {drift:.1e}"));
    }
    outcome(ok, parts.join("; "))
}

fn ac4() -> Outcome {
    let start = Instant::now();
    let base = load("standard");
    let runs: Vec<Trajectory> = [1e-3, 5e-4]
        .iter()
        .map(|&dt| {
            let mut c = base.clone();
            c.dt = dt;
            run(&c).expect("run")
        })
        .collect();
    let mut ok = runs.iter().all(Trajectory::completed);
    let mut worst_c = f64::NEG_INFINITY;
    for t in &runs {
        for w in t.records.windows(2) {
            let inc = w[1].energy.total - w[0].energy.total;
            let dt = w[1].dt;
            worst_c = worst_c.max(inc / (dt * dt));
            ok &= inc <= ENERGY_SLACK_C * dt * dt;
        }
    }
    let d0 = runs[0].energy_balance_defect();
    let d1 = runs[1].energy_balance_defect();
    let ratio = d0.abs() / d1.abs();
    ok &= ratio >= 1.8 && within(Duration::from_secs(120), start.elapsed());
    outcome(
        ok,
        format!(
            "max ΔE/dt² = {worst_c:.3e} (c = {ENERGY_SLACK_C}); balance residual {d0:.3e} → {d1:.3e}, ratio {ratio:.3}, {:.2?}",
            start.elapsed()
        ),
    )
}

fn ac5_ac6() -> (Outcome, Outcome) {
    let t = run(&load("standard")).expect("run");
    let worst = t
        .records
        .iter()
        .map(|r| r.mass_inverse_norm - 1.0 / r.min_rho)
        .fold(f64::NEG_INFINITY, f64::max);
    let ac5 = outcome(
        t.completed() && worst <= 1e-9,
        format!(
            "max over {} states of ‖M⁻¹‖ − 1/min ρ = {worst:.3e}",
            t.records.len()
        ),
    );

    let lo0 = t.records[0].min_rho;
    let hi0 = t.records[0].max_rho;
    let mut integral = 0.0;
    let mut ok = t.completed();
    let mut worst_lo: f64 = f64::INFINITY;
    let mut worst_hi: f64 = 0.0;
    for w in t.records.windows(2) {
        integral += 0.5 * (w[1].time - w[0].time) * (w[0].div_u_max + w[1].div_u_max);
        let lower = lo0 * (-integral).exp();
        let upper = hi0 * integral.exp();
        worst_lo = worst_lo.min(w[1].min_rho / lower);
        worst_hi = worst_hi.max(w[1].max_rho / upper);
        ok &= w[1].min_rho >= 0.95 * lower && w[1].max_rho <= 1.05 * upper;
    }
    let ac6 = outcome(
        ok,
        format!("min ρ/lower ≥ {worst_lo:.4}, max ρ/upper ≤ {worst_hi:.4} (5% allowed)"),
    );
    (ac5, ac6)
}

fn ac7() -> Outcome {
    let start = Instant::now();
    let table = cascade::eta_sweep(&load("standard"), &[1e-2, 1e-3, 1e-4, 1e-5]).expect("sweep");
    let m = table.metric_values("eta_metric");
    let elapsed = start.elapsed();
    match m {
        Ok(v) => outcome(
            all_completed(&table)
                && strictly_decreasing(&v)
                && v[3] < 0.1 * v[0]
                && within(Duration::from_secs(300), elapsed),
            format!("η∫∫ρ⁻¹⁰ = {}, last/first {:.2e}, {elapsed:.2?}", sci(&v), v[3] / v[0]),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn ac8() -> Outcome {
    let start = Instant::now();
    let table = cascade::delta_sweep(&load("standard"), &[1e-4, 1e-6, 1e-8]).expect("sweep");
    let elapsed = start.elapsed();
    match table.metric_values("delta_metric") {
        Ok(v) => outcome(
            all_completed(&table)
                && strictly_decreasing(&v)
                && v[2] < 0.1 * v[0]
                && within(Duration::from_secs(300), elapsed),
            format!("max |δ∫∫ρ∇Δ⁹ρ·φ| = {}, {elapsed:.2?}", sci(&v)),
        ),
        Err(e) => outcome(false, e.to_string()),
    }
}

fn ac9() -> Outcome {
    let start = Instant::now();
    let table = cascade::kappa_limit_study(&load("standard"), &[1e-2, 1e-3, 1e-4]).expect("study");
    let elapsed = start.elapsed();
    let (d, h2, l4) = match (
        table.metric_values("distance"),
        table.metric_values("kappa_h2"),
        table.metric_values("kappa_l4"),
    ) {
        (Ok(a), Ok(b), Ok(c)) => (a, b, c),
        _ => return outcome(false, "κ study entry missing a metric".into()),
    };
    outcome(
        all_completed(&table)
            && strictly_decreasing(&d)
            && nonincreasing_within(&d, 0.05)
            && uniformly_bounded(&h2)
            && uniformly_bounded(&l4)
            && within(Duration::from_secs(300), elapsed),
        format!(
            "distance {}; κ^½‖√ρ‖ {}; κ^¼‖∇ρ^¼‖ {}; {elapsed:.2?}",
            sci(&d),
            sci(&h2),
            sci(&l4)
        ),
    )
}

fn ac10() -> Outcome {
    let t = run(&load("standard")).expect("run");
    let max_iter = t.records.iter().map(|r| r.picard_iterations).max().unwrap_or(0);
    let step_means: Vec<f64> = t
        .records
        .iter()
        .filter(|r| r.picard_residuals.len() >= 2)
        .filter_map(|r| {
            let ratios: Vec<f64> = r
                .picard_residuals
                .windows(2)
                .filter(|w| w[0] > 0.0)
                .map(|w| w[1] / w[0])
                .collect();
            (!ratios.is_empty()).then(|| ratios.iter().sum::<f64>() / ratios.len() as f64)
        })
        .collect();
    let mean = step_means.iter().sum::<f64>() / step_means.len().max(1) as f64;
    let worst = step_means.iter().copied().fold(0.0, f64::max);
    outcome(
        t.completed() && t.config.dt <= 1e-3 && max_iter <= 12 && !step_means.is_empty() && mean < 0.8,
        format!("max iterations {max_iter}, mean residual ratio {mean:.3e} (worst step {worst:.3e})"),
    )
}

fn ac11() -> Outcome {
    let base = load("weak_form");
    let dts = cascade::dt_refinement(&base, &[2e-3, 1e-3, 5e-4]).expect("dt study");
    let ns = cascade::mode_refinement(&base, &[4, 8, 16]).expect("N study");
    let (rd, rn) = match (dts.metric_values("weak_residual"), ns.metric_values("weak_residual")) {
        (Ok(a), Ok(b)) => (a, b),
        _ => return outcome(false, "refinement entry missing a metric".into()),
    };
    let ratios: Vec<f64> = rd.windows(2).map(|w| w[0] / w[1]).collect();
    outcome(
        all_completed(&dts)
            && all_completed(&ns)
            && ratios.iter().all(|&r| r >= 1.8)
            && strictly_decreasing(&rn),
        format!(
            "dt 2e-3→5e-4: {} (ratios {ratios:.3?}); N 4→16: {}",
            sci(&rd),
            sci(&rn)
        ),
    )
}

fn ac12() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_qns");
    let dir = tempfile::tempdir().expect("tempdir");
    let mut ok = true;
    let mut parts = Vec::new();
    for name in SHIPPED {
        let mut streams = Vec::new();
        for k in 0..2 {
            let out = dir.path().join(format!("{name}-{k}"));
            let status = Command::new(bin)
                .args(["simulate", "--config"])
                .arg(config_path(name))
                .arg("--out")
                .arg(&out)
                .env_clear()
                .output()
                .expect("spawn qns");
            ok &= status.status.success();
            streams.push(std::fs::read(out.join("records.jsonl")).unwrap_or_default());
        }
        let same = !streams[0].is_empty() && streams[0] == streams[1];
        ok &= same;
        parts.push(format!("{name}: {} bytes {}", streams[0].len(), if same { "identical" } else { "DIFFER" }));
    }
    outcome(ok, parts.join("; "))
}

fn main() {
    let (ac1, ac2) = ac1_ac2();
    let (ac5, ac6) = ac5_ac6();
    let results = [
        ("AC-1 inequality battery", ac1),
        ("AC-2 identity battery", ac2),
        ("AC-3 mass conservation", ac3()),
        ("AC-4 energy dissipation", ac4()),
        ("AC-5 mass-operator bound", ac5),
        ("AC-6 density bracket", ac6),
        ("AC-7 eta-vanishing", ac7()),
        ("AC-8 delta-vanishing", ac8()),
        ("AC-9 kappa-limit", ac9()),
        ("AC-10 fixed-point behavior", ac10()),
        ("AC-11 weak-formulation residual", ac11()),
        ("AC-12 determinism", ac12()),
    ];
    let mut failed = 0;
    for (name, o) in &results {
        println!("[{}] {name}: {}", if o.passed { "PASS" } else { "FAIL" }, o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", results.len() - failed, results.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
