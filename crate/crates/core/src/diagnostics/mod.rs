//! Configuration documents, per-step record streams, CSV reports and the
//! verification battery.

pub mod config;
pub mod records;
pub mod report;
pub mod verify;

pub use config::{apply_env_overrides, parse_config, RunConfig};
pub use records::{read_record, read_records, write_record, DiagnosticsRecord, RecordReader};
pub use report::{energy_csv, sweep_csv};
pub use verify::{verify_battery, CheckOutcome, VerifyReport};
