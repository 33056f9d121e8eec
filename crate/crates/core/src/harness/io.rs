use std::io::{Read, Write};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::config::Algorithm;
use super::run::TrialResult;
use crate::{Error, NodeId, QueryStats, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Format::Csv),
            "json" => Ok(Format::Json),
            other => Err(Error::InvalidArgument(format!("unknown format {other:?}, expected csv or json"))),
        }
    }
}

/// Flat CSV layout: cell parameters, trial, estimate and accuracy, then one
/// column per query kind and the total. Wall time is left out so that equal
/// runs give equal files.
#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    algorithm: Algorithm,
    cell: usize,
    delta: f64,
    eps: f64,
    p_f: f64,
    alpha: f64,
    trial: usize,
    source: Option<NodeId>,
    target: NodeId,
    estimate: f64,
    exact: Option<f64>,
    abs_error: Option<f64>,
    rel_error: Option<f64>,
    success: Option<bool>,
    outputs: usize,
    deg_in: u64,
    deg_out: u64,
    #[serde(rename = "in")]
    in_: u64,
    out: u64,
    in_sorted: u64,
    adj: u64,
    jump: u64,
    total: u64,
}

/// Column names of the CSV output, in order.
pub const CSV_COLUMNS: [&str; 23] = [
    "algorithm", "cell", "delta", "eps", "p_f", "alpha", "trial", "source", "target", "estimate", "exact",
    "abs_error", "rel_error", "success", "outputs", "deg_in", "deg_out", "in", "out", "in_sorted", "adj", "jump",
    "total",
];

impl From<&TrialResult> for CsvRow {
    fn from(r: &TrialResult) -> Self {
        let q = &r.queries;
        Self {
            algorithm: r.algorithm,
            cell: r.cell,
            delta: r.delta,
            eps: r.eps,
            p_f: r.p_f,
            alpha: r.alpha,
            trial: r.trial,
            source: r.source,
            target: r.target,
            estimate: r.estimate,
            exact: r.exact,
            abs_error: r.abs_error,
            rel_error: r.rel_error,
            success: r.success,
            outputs: r.outputs,
            deg_in: q.deg_in,
            deg_out: q.deg_out,
            in_: q.in_,
            out: q.out,
            in_sorted: q.in_sorted,
            adj: q.adj,
            jump: q.jump,
            total: q.total,
        }
    }
}

impl From<CsvRow> for TrialResult {
    fn from(r: CsvRow) -> Self {
        Self {
            algorithm: r.algorithm,
            cell: r.cell,
            delta: r.delta,
            eps: r.eps,
            p_f: r.p_f,
            alpha: r.alpha,
            trial: r.trial,
            source: r.source,
            target: r.target,
            estimate: r.estimate,
            exact: r.exact,
            abs_error: r.abs_error,
            rel_error: r.rel_error,
            success: r.success,
            outputs: r.outputs,
            queries: QueryStats {
                deg_in: r.deg_in,
                deg_out: r.deg_out,
                in_: r.in_,
                out: r.out,
                in_sorted: r.in_sorted,
                adj: r.adj,
                jump: r.jump,
                total: r.total,
            },
            wall_ms: 0.0,
        }
    }
}

/// Writes the rows as CSV (header always present) or as a JSON array.
pub fn emit<W: Write>(rows: &[TrialResult], format: Format, mut w: W) -> Result<()> {
    match format {
        Format::Csv => {
            let mut out = csv::WriterBuilder::new().has_headers(false).from_writer(w);
            out.write_record(CSV_COLUMNS)?;
            for r in rows {
                out.serialize(CsvRow::from(r))?;
            }
            out.flush()?;
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut w, rows)?;
            w.write_all(b"\n")?;
        }
    }
    Ok(())
}

pub fn emit_to_path(rows: &[TrialResult], format: Format, path: &Path) -> Result<()> {
    let f = std::fs::File::create(path)?;
    emit(rows, format, std::io::BufWriter::new(f))
}

/// Reads back what [`emit`] wrote. CSV rows come back with zero wall time.
pub fn load<R: Read>(format: Format, r: R) -> Result<Vec<TrialResult>> {
    match format {
        Format::Csv => csv::Reader::from_reader(r)
            .deserialize::<CsvRow>()
            .map(|row| Ok(row?.into()))
            .collect(),
        Format::Json => Ok(serde_json::from_reader(r)?),
    }
}

pub fn load_path(format: Format, path: &Path) -> Result<Vec<TrialResult>> {
    load(format, std::io::BufReader::new(std::fs::File::open(path)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row() -> TrialResult {
        TrialResult {
            algorithm: Algorithm::Bippr,
            cell: 2,
            delta: 0.0625,
            eps: 0.2,
            p_f: 0.1,
            alpha: 0.2,
            trial: 7,
            source: Some(0),
            target: 9,
            estimate: 0.1234567890123,
            exact: Some(0.125),
            abs_error: Some(0.0015432109877),
            rel_error: None,
            success: Some(true),
            outputs: 1,
            queries: QueryStats { deg_in: 1, deg_out: 2, in_: 3, out: 4, in_sorted: 5, adj: 6, jump: 7, total: 28 },
            wall_ms: 0.0,
        }
    }

    #[test]
    fn empty_table_is_header_only() {
        let mut buf = Vec::new();
        emit(&[], Format::Csv, &mut buf).unwrap();
        assert_eq!(String::from_utf8(buf).unwrap(), format!("{}\n", CSV_COLUMNS.join(",")));
    }

    #[test]
    fn csv_and_json_round_trip() {
        for format in [Format::Csv, Format::Json] {
            let mut buf = Vec::new();
            emit(&[row()], format, &mut buf).unwrap();
            assert_eq!(load(format, buf.as_slice()).unwrap(), vec![row()]);
        }
    }
}
