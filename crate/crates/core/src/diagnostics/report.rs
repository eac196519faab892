//! CSV plot data. Output is a pure function of its input: columns are in a
//! fixed order (dissipation and metric names sorted), numbers use the
//! shortest representation that parses back to the same `f64`.

use std::collections::BTreeSet;

use crate::cascade::SweepTable;
use crate::diagnostics::records::DiagnosticsRecord;
use crate::error::{Error, Result};

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w
        .into_inner()
        .map_err(|e| Error::InvalidArgument(format!("csv buffer: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::InvalidArgument(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::InvalidArgument(format!("csv: {e}"))
}

/// One row per record: time against every energy part, mass, density range
/// and each dissipation rate.
pub fn energy_csv(records: &[DiagnosticsRecord]) -> Result<String> {
    let keys: BTreeSet<&str> = records
        .iter()
        .flat_map(|r| r.dissipation.keys().map(String::as_str))
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = [
        "step", "time", "kinetic", "pressure", "cold", "quantum", "hyper", "total", "mass", "min_rho",
        "max_rho", "picard_iterations", "floor_active", "total_dissipation",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend(keys.iter().map(|k| format!("dissipation_{k}")));
    w.write_record(&header).map_err(csv_err)?;
    for r in records {
        let e = &r.energy;
        let mut row = vec![
            r.step.to_string(),
            r.time.to_string(),
            e.kinetic.to_string(),
            e.pressure.to_string(),
            e.cold.to_string(),
            e.quantum.to_string(),
            e.hyper.to_string(),
            e.total.to_string(),
            r.mass.to_string(),
            r.min_rho.to_string(),
            r.max_rho.to_string(),
            r.picard_iterations.to_string(),
            r.floor_active.to_string(),
            r.total_dissipation().to_string(),
        ];
        row.extend(
            keys.iter()
                .map(|k| r.dissipation.get(*k).map(f64::to_string).unwrap_or_default()),
        );
        w.write_record(&row).map_err(csv_err)?;
    }
    finish(w)
}

/// One row per sweep entry; empty cells where a metric is missing.
pub fn sweep_csv(table: &SweepTable) -> Result<String> {
    let keys: BTreeSet<&str> = table
        .entries
        .iter()
        .flat_map(|e| e.metrics.keys().map(String::as_str))
        .collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec![table.parameter.clone(), "status".into(), "run_id".into()];
    header.extend(keys.iter().map(|k| k.to_string()));
    w.write_record(&header).map_err(csv_err)?;
    for e in &table.entries {
        let status = serde_json::to_value(e.status)?
            .as_str()
            .unwrap_or_default()
            .to_string();
        let mut row = vec![e.value.to_string(), status, e.run_id.clone()];
        row.extend(
            keys.iter()
                .map(|k| e.metrics.get(*k).map(f64::to_string).unwrap_or_default()),
        );
        w.write_record(&row).map_err(csv_err)?;
    }
    finish(w)
}
