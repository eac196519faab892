use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functionals::{BDEntropyBreakdown, EnergyBreakdown};

/// Per-step diagnostics of a run. One JSON object per line on disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagnosticsRecord {
    pub step: usize,
    pub time: f64,
    /// Length of the interval that ended at this record (0 for the initial record).
    pub dt: f64,
    pub energy: EnergyBreakdown,
    pub dissipation: BTreeMap<String, f64>,
    pub mass: f64,
    pub min_rho: f64,
    pub max_rho: f64,
    /// ‖div u‖_∞
    pub div_u_max: f64,
    /// ‖𝔐[ρ]⁻¹‖₂
    pub mass_inverse_norm: f64,
    pub picard_iterations: usize,
    pub picard_residuals: Vec<f64>,
    /// Number of sub-intervals the step was split into after rejections.
    pub substeps: usize,
    pub floor_active: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bd: Option<BDEntropyBreakdown>,
}

impl DiagnosticsRecord {
    pub fn total_dissipation(&self) -> f64 {
        self.dissipation.values().sum()
    }
}

/// Append one record as a JSON line.
pub fn write_record<W: Write>(w: &mut W, rec: &DiagnosticsRecord) -> Result<()> {
    serde_json::to_writer(&mut *w, rec)?;
    w.write_all(b"\n")?;
    Ok(())
}

pub fn record_to_line(rec: &DiagnosticsRecord) -> Result<String> {
    Ok(serde_json::to_string(rec)?)
}

/// Parse one line; `offset` is only used for error reporting.
pub fn read_record(line: &str, offset: u64) -> Result<DiagnosticsRecord> {
    serde_json::from_str(line).map_err(|e| Error::CorruptStream {
        offset,
        message: e.to_string(),
    })
}

/// Streaming reader over a JSON-lines record file.
pub struct RecordReader<R> {
    inner: R,
    offset: u64,
    buf: String,
}

impl<R: BufRead> RecordReader<R> {
    pub fn new(inner: R) -> Self {
        Self {
            inner,
            offset: 0,
            buf: String::new(),
        }
    }

    /// Byte offset of the next unread line.
    pub fn offset(&self) -> u64 {
        self.offset
    }
}

impl<R: BufRead> Iterator for RecordReader<R> {
    type Item = Result<DiagnosticsRecord>;

    fn next(&mut self) -> Option<Self::Item> {
        loop {
            self.buf.clear();
            let start = self.offset;
            let n = match self.inner.read_line(&mut self.buf) {
                Ok(n) => n,
                Err(e) => {
                    return Some(Err(Error::CorruptStream {
                        offset: start,
                        message: e.to_string(),
                    }))
                }
            };
            if n == 0 {
                return None;
            }
            self.offset += n as u64;
            let line = self.buf.trim_end_matches(['\n', '\r']);
            if line.trim().is_empty() {
                continue;
            }
            if !self.buf.ends_with('\n') {
                return Some(Err(Error::CorruptStream {
                    offset: start,
                    message: "truncated final record".into(),
                }));
            }
            return Some(read_record(line, start));
        }
    }
}

pub fn read_records<R: BufRead>(r: R) -> Result<Vec<DiagnosticsRecord>> {
    RecordReader::new(r).collect()
}
