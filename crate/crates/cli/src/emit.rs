//! CSV and JSON writers.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::CliError;

/// Formats a float with 12 significant digits, positional notation for
/// moderate magnitudes and scientific notation otherwise.
pub fn fmt_sig(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    let sci = format!("{x:.11e}");
    let (mantissa, exp) = sci.split_once('e').expect("scientific format has an exponent");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp).max(0) as usize;
        trim_zeros(format!("{x:.decimals$}"))
    } else {
        format!("{}e{exp}", trim_zeros(mantissa.to_string()))
    }
}

fn trim_zeros(s: String) -> String {
    if !s.contains('.') {
        return s;
    }
    s.trim_end_matches('0').trim_end_matches('.').to_string()
}

/// A table cell.
pub enum Cell {
    Int(u64),
    Float(f64),
    Bool(bool),
    Text(String),
    Empty,
}

impl Cell {
    fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Float(v) => fmt_sig(*v),
            Cell::Bool(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }
}

pub fn csv_bytes(header: &[&str], rows: &[Vec<Cell>]) -> Result<Vec<u8>, CliError> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let runtime = |e: csv::Error| CliError::Runtime(format!("csv encoding failed: {e}"));
    w.write_record(header).map_err(runtime)?;
    for row in rows {
        w.write_record(row.iter().map(Cell::render)).map_err(runtime)?;
    }
    w.into_inner().map_err(|e| CliError::Runtime(format!("csv encoding failed: {e}")))
}

pub fn json_bytes<T: Serialize + ?Sized>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut out =
        serde_json::to_vec_pretty(value).map_err(|e| CliError::Runtime(format!("json encoding failed: {e}")))?;
    out.push(b'\n');
    Ok(out)
}

/// Writes to `path`, or standard output when absent.
pub fn write_output(path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|e| CliError::Runtime(format!("cannot write {}: {e}", p.display()))),
        None => {
            let mut stdout = io::stdout().lock();
            stdout
                .write_all(bytes)
                .and_then(|_| stdout.flush())
                .map_err(|e| CliError::Runtime(format!("cannot write standard output: {e}")))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(fmt_sig(0.158655253931457), "0.158655253931");
        assert_eq!(fmt_sig(1.0), "1");
        assert_eq!(fmt_sig(-2.5), "-2.5");
        assert_eq!(fmt_sig(123456.0), "123456");
        assert_eq!(fmt_sig(3.1e-11), "3.1e-11");
        assert_eq!(fmt_sig(1.234567890123456e15), "1.23456789012e15");
        assert_eq!(fmt_sig(0.0001), "0.0001");
        assert_eq!(fmt_sig(f64::INFINITY), "inf");
        assert_eq!(fmt_sig(0.0), "0");
    }

    #[test]
    fn round_trip_within_twelve_digits() {
        for x in [std::f64::consts::PI, 1e-7 / 3.0, 2.0 / 3.0 * 1e9, 0.999_999_999_999_9] {
            let back: f64 = fmt_sig(x).parse().unwrap();
            assert!((back - x).abs() <= 5e-12 * x.abs(), "{x} -> {}", fmt_sig(x));
        }
    }

    #[test]
    fn header_only_table() {
        let bytes = csv_bytes(&["theta", "n", "bound"], &[]).unwrap();
        assert_eq!(bytes, b"theta,n,bound\n");
    }
}
