//! CSV tables: a `t` column followed by the named columns, floats written
//! with 17 significant digits so that reading back is bit-exact.

use std::path::Path;

use crate::besov::NormTrace;
use crate::error::{Error, Result};
use crate::linear::SpectrumRow;

fn csv_error(e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::Io(io),
        other => Error::Data(format!("csv: {other:?}")),
    }
}

fn number(v: f64) -> String {
    format!("{v:.16e}")
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<Vec<u8>> {
    w.into_inner()
        .map_err(|e| Error::Io(std::io::Error::other(e.to_string())))
}

/// The CSV text of a trace.
pub fn trace_csv(trace: &NormTrace) -> Result<Vec<u8>> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let header = std::iter::once("t").chain(trace.names().iter().map(String::as_str));
    w.write_record(header).map_err(csv_error)?;
    for (t, row) in trace.times().iter().zip(trace.rows()) {
        let record = std::iter::once(t).chain(row).map(|&v| number(v));
        w.write_record(record).map_err(csv_error)?;
    }
    finish(w)
}

pub fn write_trace(path: &Path, trace: &NormTrace) -> Result<()> {
    super::write_atomic(path, &trace_csv(trace)?)
}

pub fn read_trace(path: &Path) -> Result<NormTrace> {
    let mut r = csv::Reader::from_path(path).map_err(csv_error)?;
    let header = r.headers().map_err(csv_error)?.clone();
    if header.get(0) != Some("t") {
        return Err(Error::Data("trace must start with a t column".into()));
    }
    let mut trace = NormTrace::new(header.iter().skip(1).map(String::from).collect());
    for record in r.records() {
        let record = record.map_err(csv_error)?;
        let values: Vec<f64> = record
            .iter()
            .map(|v| {
                v.parse()
                    .map_err(|_| Error::Data(format!("bad number {v:?} in trace")))
            })
            .collect::<Result<_>>()?;
        let (t, row) = values
            .split_first()
            .ok_or_else(|| Error::Data("empty trace row".into()))?;
        trace.push(*t, row.to_vec())?;
    }
    Ok(trace)
}

/// Eigenvalue table with columns `|xi|,re_fast,re_slow,im,regime,rate_floor`.
pub fn write_spectrum(path: &Path, rows: &[SpectrumRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["|xi|", "re_fast", "re_slow", "im", "regime", "rate_floor"])
        .map_err(csv_error)?;
    for r in rows {
        w.write_record([
            number(r.xi),
            number(r.re_fast),
            number(r.re_slow),
            number(r.im),
            r.regime.name().to_string(),
            number(r.rate_floor),
        ])
        .map_err(csv_error)?;
    }
    super::write_atomic(path, &finish(w)?)
}
