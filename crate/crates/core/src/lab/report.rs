//! CSV and JSON persistence of convergence reports.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::lab::study::ConvergenceReport;

pub const CSV_HEADER: &str = "alpha,mu,d,K,tau,err_l2_hm1,err_h1_l2,steps,walltime_s,flag";

/// One header line, then one line per row in report order.
pub fn write_csv(report: &ConvergenceReport, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    write_csv_to(report, BufWriter::new(file)).map_err(|e| Error::io(path, e))
}

pub fn write_csv_to<W: Write>(report: &ConvergenceReport, mut out: W) -> std::io::Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in &report.rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{}",
            r.alpha,
            r.mu,
            r.d,
            r.degree,
            r.tau,
            r.err_l2_hm1,
            r.err_h1_l2,
            r.steps,
            r.walltime_s,
            r.flag.replace(',', ";")
        )?;
    }
    out.flush()
}

pub fn write_json(report: &ConvergenceReport, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut out = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut out, report).map_err(|e| Error::json(path, e))?;
    out.flush().map_err(|e| Error::io(path, e))
}

pub fn read_json(path: &Path) -> Result<ConvergenceReport> {
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    serde_json::from_reader(BufReader::new(file)).map_err(|e| Error::json(path, e))
}

/// Writes the CSV and, if requested, the JSON report.
pub fn write_report(report: &ConvergenceReport, csv: &Path, json: Option<&Path>) -> Result<()> {
    write_csv(report, csv)?;
    if let Some(json) = json {
        write_json(report, json)?;
    }
    Ok(())
}
