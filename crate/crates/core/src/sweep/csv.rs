//! Sweep records as CSV.
//!
//! Header `omega_ghz,gamma_ghz,fidelity,t_init_ns,speed_ghz,reachable`, one
//! row per record in sweep order, LF line endings. Numbers carry nine
//! significant digits; unreachable points leave time and speed empty.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use super::{SweepError, SweepRecord};

pub const HEADER: &str = "omega_ghz,gamma_ghz,fidelity,t_init_ns,speed_ghz,reachable";

/// `%.9g`-style formatting: nine significant digits, trailing zeros
/// trimmed, scientific notation outside 1e-5..1e9.
pub fn format_sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    // the exponent after rounding to nine digits
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..9).contains(&exp) {
        let decimals = (8 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    } else {
        format!("{}e{exp}", trim_zeros(mantissa))
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

fn optional(x: Option<f64>) -> String {
    x.map(format_sig9).unwrap_or_default()
}

pub fn record_line(r: &SweepRecord) -> String {
    format!(
        "{},{},{},{},{},{}\n",
        format_sig9(r.omega_ghz),
        format_sig9(r.gamma_ghz),
        format_sig9(r.fidelity),
        optional(r.t_init_ns),
        optional(r.speed_ghz),
        r.reachable
    )
}

/// Writes the CSV document and returns the number of bytes written.
pub fn write_csv<W: Write>(records: &[SweepRecord], mut dest: W) -> std::io::Result<usize> {
    let mut written = 0;
    let header = format!("{HEADER}\n");
    dest.write_all(header.as_bytes())?;
    written += header.len();
    for r in records {
        let line = record_line(r);
        dest.write_all(line.as_bytes())?;
        written += line.len();
    }
    dest.flush()?;
    Ok(written)
}

pub fn write_csv_file(records: &[SweepRecord], path: &Path) -> std::io::Result<usize> {
    write_csv(records, BufWriter::new(File::create(path)?))
}

pub fn to_csv_string(records: &[SweepRecord]) -> String {
    let mut buf = Vec::new();
    write_csv(records, &mut buf).expect("writing to memory cannot fail");
    String::from_utf8(buf).expect("CSV is UTF-8")
}

/// Parses a document produced by [`write_csv`].
pub fn parse_csv(text: &str) -> Result<Vec<SweepRecord>, SweepError> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, h)) if h == HEADER => {}
        _ => return Err(SweepError::Csv { line: 1, message: "missing or unexpected header".into() }),
    }
    let mut records = Vec::new();
    for (i, line) in lines {
        let line_no = i + 1;
        let err = |message: String| SweepError::Csv { line: line_no, message };
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(err(format!("expected 6 fields, found {}", fields.len())));
        }
        let num = |s: &str| s.parse::<f64>().map_err(|e| err(format!("`{s}`: {e}")));
        let opt = |s: &str| if s.is_empty() { Ok(None) } else { num(s).map(Some) };
        let reachable = match fields[5] {
            "true" => true,
            "false" => false,
            other => return Err(err(format!("bad reachable flag `{other}`"))),
        };
        records.push(SweepRecord {
            omega_ghz: num(fields[0])?,
            gamma_ghz: num(fields[1])?,
            fidelity: num(fields[2])?,
            t_init_ns: opt(fields[3])?,
            speed_ghz: opt(fields[4])?,
            reachable,
        });
    }
    Ok(records)
}
