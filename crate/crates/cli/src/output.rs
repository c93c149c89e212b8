//! Rendering a report as pretty JSON or CSV, to stdout or a file.

use std::io::Write;

use crate::commands::Report;
use crate::config::{Format, RunConfig};

pub fn render(report: &Report, format: Format) -> Result<Vec<u8>, String> {
    match format {
        Format::Json => {
            let mut out = serde_json::to_vec_pretty(&report.json).map_err(|e| e.to_string())?;
            out.push(b'\n');
            Ok(out)
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(&report.table.header).map_err(|e| e.to_string())?;
            for row in &report.table.rows {
                w.write_record(row).map_err(|e| e.to_string())?;
            }
            w.into_inner().map_err(|e| e.to_string())
        }
    }
}

pub fn write(report: &Report, config: &RunConfig) -> Result<(), String> {
    let bytes = render(report, config.format)?;
    match &config.output {
        Some(path) => std::fs::write(path, bytes).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => std::io::stdout().write_all(&bytes).map_err(|e| e.to_string()),
    }
}
