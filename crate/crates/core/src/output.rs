//! CSV and JSON serialization of tables and reports.
//!
//! Floats in CSV are written with 17 significant digits so that parsing a
//! file reproduces the in-memory values exactly. JSON documents carry a
//! top-level `"schema"` key.

use serde::Serialize;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::explorer::{InvariantEntry, SweepRow, TracePoint};

pub const SCHEMA: &str = "fock-sharp/1";

pub use csv::StringRecord as CsvRecord;

/// Full-precision decimal form of `x`.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn out_err(e: impl std::fmt::Display) -> Error {
    Error::Output(e.to_string())
}

pub trait CsvRow: Sized {
    const HEADER: &'static [&'static str];
    fn fields(&self) -> Vec<String>;
    fn parse(record: &csv::StringRecord) -> Result<Self>;
}

fn field<T: std::str::FromStr>(record: &csv::StringRecord, i: usize) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    record
        .get(i)
        .ok_or_else(|| Error::Output(format!("missing column {i}")))?
        .parse()
        .map_err(out_err)
}

impl CsvRow for SweepRow {
    const HEADER: &'static [&'static str] = &["k", "ratio", "gap"];

    fn fields(&self) -> Vec<String> {
        vec![self.k.to_string(), fmt_f64(self.ratio), fmt_f64(self.gap)]
    }

    fn parse(r: &csv::StringRecord) -> Result<Self> {
        Ok(Self {
            k: field(r, 0)?,
            ratio: field(r, 1)?,
            gap: field(r, 2)?,
        })
    }
}

impl CsvRow for TracePoint {
    const HEADER: &'static [&'static str] = &["iteration", "best_ratio"];

    fn fields(&self) -> Vec<String> {
        vec![self.iteration.to_string(), fmt_f64(self.best_ratio)]
    }

    fn parse(r: &csv::StringRecord) -> Result<Self> {
        Ok(Self {
            iteration: field(r, 0)?,
            best_ratio: field(r, 1)?,
        })
    }
}

impl CsvRow for InvariantEntry {
    const HEADER: &'static [&'static str] = &["name", "samples", "worst_margin", "passed"];

    fn fields(&self) -> Vec<String> {
        vec![
            self.name.clone(),
            self.samples.to_string(),
            fmt_f64(self.worst_margin),
            self.passed.to_string(),
        ]
    }

    fn parse(r: &csv::StringRecord) -> Result<Self> {
        Ok(Self {
            name: field(r, 0)?,
            samples: field(r, 1)?,
            worst_margin: field(r, 2)?,
            passed: field(r, 3)?,
        })
    }
}

pub fn write_csv<T: CsvRow>(rows: &[T], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(T::HEADER).map_err(out_err)?;
    for row in rows {
        w.write_record(row.fields()).map_err(out_err)?;
    }
    w.flush().map_err(out_err)
}

pub fn to_csv_string<T: CsvRow>(rows: &[T]) -> Result<String> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    String::from_utf8(buf).map_err(out_err)
}

pub fn read_csv<T: CsvRow>(input: impl Read) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(input);
    let header = r.headers().map_err(out_err)?;
    if header.iter().ne(T::HEADER.iter().copied()) {
        return Err(Error::Output(format!("unexpected header {header:?}")));
    }
    r.records()
        .map(|rec| T::parse(&rec.map_err(out_err)?))
        .collect()
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    kind: &'a str,
    data: &'a T,
}

/// `{"schema": "fock-sharp/1", "kind": kind, "data": payload}`.
pub fn to_json<T: Serialize>(kind: &str, payload: &T) -> Result<String> {
    serde_json::to_string_pretty(&Envelope {
        schema: SCHEMA,
        kind,
        data: payload,
    })
    .map_err(out_err)
}
