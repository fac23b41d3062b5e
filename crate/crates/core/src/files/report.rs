use serde::{Deserialize, Serialize};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{CheeseError, Result};
use crate::verify::CertReport;

pub const REPORT_FORMAT: &str = "swiss-cheese-report";
pub const REPORT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Environment {
    pub crate_version: String,
    pub os: String,
    pub arch: String,
    pub workers: usize,
}

impl Environment {
    pub fn current(workers: usize) -> Self {
        Environment {
            crate_version: env!("CARGO_PKG_VERSION").to_string(),
            os: std::env::consts::OS.to_string(),
            arch: std::env::consts::ARCH.to_string(),
            workers,
        }
    }
}

/// First line of a report file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub format: String,
    pub format_version: u32,
    pub suite: String,
    pub seed: u64,
    pub environment: Environment,
}

impl ReportHeader {
    pub fn new(suite: &str, seed: u64, environment: Environment) -> Self {
        ReportHeader {
            format: REPORT_FORMAT.to_string(),
            format_version: REPORT_VERSION,
            suite: suite.to_string(),
            seed,
            environment,
        }
    }
}

/// JSON lines: the header, then one row per report, appended as checks
/// finish.
pub struct ReportWriter<W: Write> {
    out: W,
    rows: usize,
}

impl ReportWriter<BufWriter<File>> {
    pub fn create(path: &Path, header: &ReportHeader) -> Result<Self> {
        ReportWriter::new(BufWriter::new(File::create(path)?), header)
    }
}

impl<W: Write> ReportWriter<W> {
    pub fn new(mut out: W, header: &ReportHeader) -> Result<Self> {
        serde_json::to_writer(&mut out, header)?;
        out.write_all(b"\n")?;
        Ok(ReportWriter { out, rows: 0 })
    }

    pub fn append(&mut self, row: &CertReport) -> Result<()> {
        serde_json::to_writer(&mut self.out, row)?;
        self.out.write_all(b"\n")?;
        self.rows += 1;
        Ok(())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn finish(mut self) -> Result<W> {
        self.out.flush()?;
        Ok(self.out)
    }
}

pub fn parse_report<R: BufRead>(input: R) -> Result<(ReportHeader, Vec<CertReport>)> {
    let mut lines = input.lines();
    let first = lines.next().ok_or_else(|| CheeseError::Format("empty report".into()))??;
    let header: ReportHeader = serde_json::from_str(&first)?;
    if header.format != REPORT_FORMAT || header.format_version != REPORT_VERSION {
        return Err(CheeseError::Format(format!(
            "unsupported report {:?} version {}",
            header.format, header.format_version
        )));
    }
    let mut rows = Vec::new();
    for line in lines {
        let line = line?;
        if !line.trim().is_empty() {
            rows.push(serde_json::from_str(&line)?);
        }
    }
    Ok((header, rows))
}

pub fn read_report(path: &Path) -> Result<(ReportHeader, Vec<CertReport>)> {
    parse_report(BufReader::new(File::open(path)?))
}
