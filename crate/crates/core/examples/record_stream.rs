//! Stream records to a JSON-lines file, read them back and emit plot CSV.
//!
//! cargo run --example record_stream

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};

use qns_core::diagnostics::{energy_csv, parse_config, write_record, RecordReader};
use qns_core::galerkin;

fn main() -> qns_core::Result<()> {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/configs/standard.json"))?;
    let mut cfg = parse_config(&text)?;
    cfg.t_final = 0.02;

    let path = std::env::temp_dir().join("qns_record_stream.jsonl");
    let mut out = BufWriter::new(File::create(&path)?);
    galerkin::run_with(&cfg, |rec| {
        write_record(&mut out, rec)?;
        Ok(())
    })?;
    out.flush()?;
    drop(out);

    let mut reader = RecordReader::new(BufReader::new(File::open(&path)?));
    let records = (&mut reader).collect::<qns_core::Result<Vec<_>>>()?;
    println!("read {} records, {} bytes from {}", records.len(), reader.offset(), path.display());
    print!("{}", energy_csv(&records[..3])?);
    Ok(())
}
