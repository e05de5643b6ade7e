//! Curve file formats.
//!
//! * CSV: one `x,y` pair per line, optional `x,y` header. A closing point
//!   equal to the first one is accepted on read and never written.
//! * JSON: `{"nodes": [[x, y], ...], "closed": true}`.
//!
//! Distance matrices are CSV: a header row of curve identifiers followed by
//! one row of distances per curve, in header order. Failed pairs are `NaN`.

use std::fs::File;
use std::io::{BufReader, Read, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::point::Point2;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CurveFormat {
    Csv,
    Json,
}

impl CurveFormat {
    /// Format implied by a file extension (`.json` is JSON, anything else CSV).
    pub fn from_path(path: &Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("json") => CurveFormat::Json,
            _ => CurveFormat::Csv,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct CurveDocument {
    nodes: Vec<Point2>,
    #[serde(default = "default_closed")]
    closed: bool,
}

fn default_closed() -> bool {
    true
}

pub fn parse_csv<R: Read>(reader: R) -> Result<Curve> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader);
    let mut nodes = Vec::new();
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        if record.len() != 2 {
            return Err(Error::Parse(format!(
                "line {}: expected 2 fields, found {}",
                line + 1,
                record.len()
            )));
        }
        if line == 0 && record[0].eq_ignore_ascii_case("x") && record[1].eq_ignore_ascii_case("y") {
            continue;
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .map_err(|e| Error::Parse(format!("line {}: `{s}`: {e}", line + 1)))
        };
        nodes.push(Point2::new(parse(&record[0])?, parse(&record[1])?));
    }
    Curve::new(nodes)
}

pub fn parse_json<R: Read>(reader: R) -> Result<Curve> {
    let doc: CurveDocument =
        serde_json::from_reader(reader).map_err(|e| Error::Parse(e.to_string()))?;
    if !doc.closed {
        return Err(Error::Parse("only closed curves are supported".into()));
    }
    Curve::new(doc.nodes)
}

pub fn read_curve(path: &Path) -> Result<Curve> {
    let reader = BufReader::new(File::open(path)?);
    match CurveFormat::from_path(path) {
        CurveFormat::Csv => parse_csv(reader),
        CurveFormat::Json => parse_json(reader),
    }
}

pub fn write_curve<W: Write>(curve: &Curve, format: CurveFormat, mut out: W) -> Result<()> {
    match format {
        CurveFormat::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(["x", "y"])
                .map_err(|e| Error::Parse(e.to_string()))?;
            for p in curve.nodes() {
                w.write_record([p.x.to_string(), p.y.to_string()])
                    .map_err(|e| Error::Parse(e.to_string()))?;
            }
            w.flush()?;
        }
        CurveFormat::Json => {
            let doc = CurveDocument {
                nodes: curve.nodes().to_vec(),
                closed: true,
            };
            serde_json::to_writer(&mut out, &doc).map_err(|e| Error::Parse(e.to_string()))?;
            writeln!(out)?;
        }
    }
    Ok(())
}

pub fn write_distance_matrix<W: Write>(ids: &[String], values: &[Vec<f64>], out: W) -> Result<()> {
    if values.len() != ids.len() || values.iter().any(|row| row.len() != ids.len()) {
        return Err(Error::InvalidParameter(format!(
            "distance matrix must be {0}x{0} to match its identifiers",
            ids.len()
        )));
    }
    let csv_err = |e: csv::Error| Error::Parse(e.to_string());
    let mut w = csv::Writer::from_writer(out);
    w.write_record(ids).map_err(csv_err)?;
    for row in values {
        w.write_record(row.iter().map(|v| v.to_string()))
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Inverse of [`write_distance_matrix`].
pub fn read_distance_matrix<R: Read>(reader: R) -> Result<(Vec<String>, Vec<Vec<f64>>)> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(reader);
    let ids: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Parse(e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    let mut values = Vec::with_capacity(ids.len());
    for (line, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| Error::Parse(e.to_string()))?;
        let row = record
            .iter()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|e| Error::Parse(format!("row {}: `{s}`: {e}", line + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        values.push(row);
    }
    if values.len() != ids.len() {
        return Err(Error::Parse(format!(
            "expected {} rows, found {}",
            ids.len(),
            values.len()
        )));
    }
    Ok((ids, values))
}
