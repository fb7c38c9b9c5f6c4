//! CSV and JSON artifacts. Floats are written in Rust's shortest round-trip
//! form, so reading a table back and writing it again reproduces the bytes.

use std::io::{Read, Write};

use kgon_core::bounds::{BoundKind, BoundReport};
use kgon_core::{Error, FeatureRow};

use crate::Failure;

pub const BOUNDS_HEADER: [&str; 7] = ["id", "K", "E", "kLA", "kDA", "kLC", "kDC"];
pub const FEATURES_HEADER: [&str; 5] = ["id", "abs_curvature", "length", "sign_changes", "K"];
pub const CURVES_HEADER: [&str; 4] = ["id", "bound", "k", "error"];
pub const PREDICTIONS_HEADER: [&str; 4] = ["id", "response", "predicted", "k"];

/// One row of the bounds table; a bound that was not requested or could not
/// be found is `None` and written as an empty field.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsRow {
    pub id: String,
    pub points: usize,
    pub threshold: f64,
    pub bounds: [Option<usize>; 4],
}

impl BoundsRow {
    pub fn from_report(report: &BoundReport, wanted: &[BoundKind]) -> Self {
        BoundsRow {
            id: report.id.clone(),
            points: report.points,
            threshold: report.threshold,
            bounds: BoundKind::ALL.map(|k| {
                if wanted.contains(&k) {
                    report.get(k).clone().ok()
                } else {
                    None
                }
            }),
        }
    }

    pub fn get(&self, kind: BoundKind) -> Option<usize> {
        self.bounds[kind.index()]
    }
}

fn parse_field<T: std::str::FromStr>(record: &csv::StringRecord, i: usize, what: &str, line: u64) -> Result<T, Failure>
where
    T::Err: std::fmt::Display,
{
    let raw = record.get(i).unwrap_or_default().trim();
    raw.parse()
        .map_err(|e| Failure::Input(format!("line {line}: bad {what} `{raw}`: {e}")))
}

fn check_header(reader: &mut csv::Reader<impl Read>, expected: &[&str], table: &str) -> Result<(), Failure> {
    let headers = reader.headers().map_err(|e| Failure::Input(format!("{table}: {e}")))?;
    let got: Vec<&str> = headers.iter().map(str::trim).collect();
    if got != expected {
        return Err(Failure::Input(format!(
            "{table}: expected header `{}`, found `{}`",
            expected.join(","),
            got.join(",")
        )));
    }
    Ok(())
}

fn records(reader: &mut csv::Reader<impl Read>) -> impl Iterator<Item = Result<(u64, csv::StringRecord), Failure>> + '_ {
    reader.records().map(|r| {
        let r = r.map_err(|e| Failure::Input(e.to_string()))?;
        let line = r.position().map(|p| p.line()).unwrap_or(0);
        Ok((line, r))
    })
}

pub fn write_bounds<W: Write>(w: W, rows: &[BoundsRow]) -> Result<(), Failure> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(BOUNDS_HEADER)?;
    for r in rows {
        let mut fields = vec![r.id.clone(), r.points.to_string(), r.threshold.to_string()];
        fields.extend(r.bounds.iter().map(|b| b.map(|k| k.to_string()).unwrap_or_default()));
        out.write_record(&fields)?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_bounds<R: Read>(r: R) -> Result<Vec<BoundsRow>, Failure> {
    let mut reader = csv::Reader::from_reader(r);
    check_header(&mut reader, &BOUNDS_HEADER, "bounds")?;
    records(&mut reader)
        .map(|rec| {
            let (line, rec) = rec?;
            let mut bounds = [None; 4];
            for (j, slot) in bounds.iter_mut().enumerate() {
                let raw = rec.get(3 + j).unwrap_or_default().trim();
                if !raw.is_empty() {
                    *slot = Some(parse_field(&rec, 3 + j, BOUNDS_HEADER[3 + j], line)?);
                }
            }
            Ok(BoundsRow {
                id: rec.get(0).unwrap_or_default().to_string(),
                points: parse_field(&rec, 1, "K", line)?,
                threshold: parse_field(&rec, 2, "E", line)?,
                bounds,
            })
        })
        .collect()
}

pub fn write_features<W: Write>(w: W, rows: &[FeatureRow]) -> Result<(), Failure> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(FEATURES_HEADER)?;
    for r in rows {
        out.write_record([
            r.id.clone(),
            r.total_abs_curvature.to_string(),
            r.length.to_string(),
            r.sign_changes.to_string(),
            r.points.to_string(),
        ])?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_features<R: Read>(r: R) -> Result<Vec<FeatureRow>, Failure> {
    let mut reader = csv::Reader::from_reader(r);
    check_header(&mut reader, &FEATURES_HEADER, "features")?;
    records(&mut reader)
        .map(|rec| {
            let (line, rec) = rec?;
            Ok(FeatureRow {
                id: rec.get(0).unwrap_or_default().to_string(),
                total_abs_curvature: parse_field(&rec, 1, "abs_curvature", line)?,
                length: parse_field(&rec, 2, "length", line)?,
                sign_changes: parse_field(&rec, 3, "sign_changes", line)?,
                points: parse_field(&rec, 4, "K", line)?,
                category: None,
            })
        })
        .collect()
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        if e.is_numeric() {
            Failure::Numeric(e.to_string())
        } else {
            Failure::Input(e.to_string())
        }
    }
}
