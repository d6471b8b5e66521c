// SPDX-License-Identifier: Apache-2.0

//! CSV and JSON serialization of run results.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{OutputFormat, Payload, RunResult};
use crate::error::{Error, Result};
use crate::hybrid::{Diagnostics, TimeRecord, TimeSeries};
use crate::spin_algebra::C64;

pub const HYBRID_HEADER: [&str; 17] = [
    "t",
    "x1",
    "v1",
    "x2",
    "v2",
    "s1x",
    "s1y",
    "s1z",
    "s2x",
    "s2y",
    "s2z",
    "otoc",
    "two_point_re",
    "two_point_im",
    "h0",
    "h_nv",
    "v_int",
];

pub const CHANNEL_HEADER: [&str; 8] = [
    "n",
    "t",
    "otoc",
    "otoc_closed_form",
    "thermal_otoc",
    "thermal_otoc_trace",
    "thermal_concurrence",
    "thermal_concurrence_wootters",
];

fn hybrid_row(r: &TimeRecord) -> Vec<f64> {
    vec![
        r.t,
        r.x1,
        r.v1,
        r.x2,
        r.v2,
        r.s1[0],
        r.s1[1],
        r.s1[2],
        r.s2[0],
        r.s2[1],
        r.s2[2],
        r.otoc,
        r.two_point.re,
        r.two_point.im,
        r.h0,
        r.h_nv,
        r.v_int,
    ]
}

fn hybrid_record(row: &[f64]) -> TimeRecord {
    TimeRecord {
        t: row[0],
        x1: row[1],
        v1: row[2],
        x2: row[3],
        v2: row[4],
        s1: [row[5], row[6], row[7]],
        s2: [row[8], row[9], row[10]],
        otoc: row[11],
        two_point: C64::new(row[12], row[13]),
        h0: row[14],
        h_nv: row[15],
        v_int: row[16],
    }
}

/// Column names and rows of a result.
pub fn table(result: &RunResult) -> (&'static [&'static str], Vec<Vec<f64>>) {
    match &result.payload {
        Payload::Hybrid { series, .. } => (&HYBRID_HEADER, series.records.iter().map(hybrid_row).collect()),
        Payload::Channel { rows } => (
            &CHANNEL_HEADER,
            rows.iter()
                .map(|r| {
                    vec![
                        r.n,
                        r.t,
                        r.otoc,
                        r.otoc_closed_form,
                        r.thermal_otoc,
                        r.thermal_otoc_trace,
                        r.thermal_concurrence,
                        r.thermal_concurrence_wootters,
                    ]
                })
                .collect(),
        ),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JsonOutput {
    pub scenario: String,
    /// Config echo.
    pub config: String,
    pub columns: Vec<String>,
    pub records: Vec<BTreeMap<String, f64>>,
    pub diagnostics: Option<Diagnostics>,
}

fn io_err(path: &Path) -> impl Fn(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.display().to_string(),
        source,
    }
}

fn csv_err(path: &Path) -> impl Fn(csv::Error) -> Error + '_ {
    move |e| match e.into_kind() {
        csv::ErrorKind::Io(source) => Error::Io {
            path: path.display().to_string(),
            source,
        },
        other => Error::Format(format!("{}: {other:?}", path.display())),
    }
}

/// Writes the result table to `path`; numbers carry 17 significant digits.
pub fn write_output(result: &RunResult, format: OutputFormat, path: &Path) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    write_output_to(result, format, &mut w).map_err(|e| match e {
        Error::Io { source, .. } => io_err(path)(source),
        other => other,
    })?;
    w.flush().map_err(io_err(path))
}

/// As [`write_output`], into any writer.
pub fn write_output_to<W: Write>(result: &RunResult, format: OutputFormat, mut out: W) -> Result<()> {
    let stream = Path::new("<stream>");
    let (header, rows) = table(result);
    match format {
        OutputFormat::Csv => {
            let mut w = csv::Writer::from_writer(&mut out);
            w.write_record(header).map_err(csv_err(stream))?;
            for row in &rows {
                w.write_record(row.iter().map(|v| format!("{v:.16e}")))
                    .map_err(csv_err(stream))?;
            }
            w.flush().map_err(io_err(stream))?;
        }
        OutputFormat::Json => {
            let doc = JsonOutput {
                scenario: result.config.scenario.clone(),
                config: result.echo(),
                columns: header.iter().map(|s| s.to_string()).collect(),
                records: rows
                    .iter()
                    .map(|row| header.iter().map(|h| h.to_string()).zip(row.iter().copied()).collect())
                    .collect(),
                diagnostics: result.diagnostics().copied(),
            };
            serde_json::to_writer_pretty(&mut out, &doc).map_err(|e| Error::Format(e.to_string()))?;
            out.write_all(b"\n").map_err(io_err(stream))?;
        }
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}

pub fn read_csv(path: &Path) -> Result<CsvTable> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut r = csv::Reader::from_reader(file);
    let header: Vec<String> = r.headers().map_err(csv_err(path))?.iter().map(String::from).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        let rec = rec.map_err(csv_err(path))?;
        let row = rec
            .iter()
            .map(|f| {
                f.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Format(format!("{}: bad number '{f}'", path.display())))
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(row);
    }
    Ok(CsvTable { header, rows })
}

/// Reads a hybrid CSV back into a series.
pub fn read_series(path: &Path) -> Result<TimeSeries> {
    let t = read_csv(path)?;
    if t.header != HYBRID_HEADER {
        return Err(Error::Format(format!(
            "{}: not a hybrid time-series header",
            path.display()
        )));
    }
    Ok(TimeSeries {
        records: t.rows.iter().map(|r| hybrid_record(r)).collect(),
    })
}

pub fn read_json(path: &Path) -> Result<JsonOutput> {
    let file = File::open(path).map_err(io_err(path))?;
    serde_json::from_reader(std::io::BufReader::new(file))
        .map_err(|e| Error::Format(format!("{}: {e}", path.display())))
}
