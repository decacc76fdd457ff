//! CSV, JSON-lines and SVG output of scan records.

use std::fmt::Write as _;
use std::io::Write;

use super::{ScanKind, ScanRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

const INTEGER_COLUMNS: [&str; 3] = ["D", "h", "char"];

/// 17 significant digits in scientific notation; integers columns stay integral.
pub fn format_float(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        // not valid in JSON, but keeps CSV columns aligned
        format!("{v}")
    }
}

fn format_cell(column: &str, v: f64) -> String {
    if INTEGER_COLUMNS.contains(&column) && v.fract() == 0.0 && v.abs() < 9e15 {
        format!("{}", v as i64)
    } else {
        format_float(v)
    }
}

fn check_uniform(records: &[ScanRecord]) -> Result<Option<ScanKind>> {
    let kind = records.first().map(|r| r.scan_kind);
    if records.iter().any(|r| Some(r.scan_kind) != kind) {
        return Err(Error::Domain("records of different scan kinds cannot share a file".into()));
    }
    Ok(kind)
}

fn io_err(e: std::io::Error) -> Error {
    Error::io("<output>", e)
}

/// Header row, then one row per record: inputs in column order, value, ratio.
pub fn write_csv<W: Write>(out: &mut W, kind: ScanKind, records: &[ScanRecord]) -> Result<()> {
    if check_uniform(records)?.is_some_and(|k| k != kind) {
        return Err(Error::Domain("record kind does not match the requested layout".into()));
    }
    let cols = kind.columns();
    writeln!(out, "{},value,ratio", cols.join(",")).map_err(io_err)?;
    for r in records {
        let mut line = String::new();
        for (c, v) in cols.iter().zip(&r.inputs) {
            line.push_str(&format_cell(c, *v));
            line.push(',');
        }
        let _ = write!(line, "{},{}", format_float(r.value), format_float(r.ratio));
        writeln!(out, "{line}").map_err(io_err)?;
    }
    Ok(())
}

/// One JSON object per line with the same field names as the CSV header.
pub fn write_json<W: Write>(out: &mut W, kind: ScanKind, records: &[ScanRecord]) -> Result<()> {
    check_uniform(records)?;
    let cols = kind.columns();
    for r in records {
        let mut line = String::from("{");
        for (c, v) in cols.iter().zip(&r.inputs) {
            let _ = write!(line, "\"{c}\":{},", json_number(c, *v));
        }
        let _ = write!(line, "\"value\":{},\"ratio\":{}}}", json_number("", r.value), json_number("", r.ratio));
        writeln!(out, "{line}").map_err(io_err)?;
    }
    Ok(())
}

fn json_number(column: &str, v: f64) -> String {
    if v.is_finite() {
        format_cell(column, v)
    } else {
        "null".into()
    }
}

/// Log-log scatter of (|x-field|, ratio) as a standalone SVG document.
pub fn write_svg<W: Write>(out: &mut W, kind: ScanKind, records: &[ScanRecord]) -> Result<()> {
    let xi = kind.columns().iter().position(|c| *c == kind.x_field()).unwrap_or(0);
    let pts: Vec<(f64, f64)> = records
        .iter()
        .map(|r| (r.inputs[xi].abs(), r.ratio))
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.log10(), y.log10()))
        .collect();
    let (w, h, m) = (640.0, 480.0, 60.0);
    let span = |vals: Vec<f64>| {
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        if !lo.is_finite() {
            (0.0, 1.0)
        } else {
            let (lo, hi) = (lo.floor(), hi.ceil());
            (lo, if hi > lo { hi } else { lo + 1.0 })
        }
    };
    let (x0, x1) = span(pts.iter().map(|p| p.0).collect());
    let (y0, y1) = span(pts.iter().map(|p| p.1).collect());
    let px = |x: f64| m + (x - x0) / (x1 - x0) * (w - 2.0 * m);
    let py = |y: f64| h - m - (y - y0) / (y1 - y0) * (h - 2.0 * m);
    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(
        s,
        r#"<path d="M{m} {m} V{} H{}" stroke="black" fill="none"/>"#,
        h - m,
        w - m
    );
    for d in x0 as i64..=x1 as i64 {
        let x = px(d as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{x:.1}" y1="{}" x2="{x:.1}" y2="{}" stroke="black"/><text x="{x:.1}" y="{}" font-size="12" text-anchor="middle">1e{d}</text>"#,
            h - m,
            h - m + 5.0,
            h - m + 20.0
        );
    }
    for d in y0 as i64..=y1 as i64 {
        let y = py(d as f64);
        let _ = writeln!(
            s,
            r#"<line x1="{}" y1="{y:.1}" x2="{m}" y2="{y:.1}" stroke="black"/><text x="{}" y="{:.1}" font-size="12" text-anchor="end">1e{d}</text>"#,
            m - 5.0,
            m - 8.0,
            y + 4.0
        );
    }
    let _ = writeln!(
        s,
        r#"<text x="{}" y="{}" font-size="14" text-anchor="middle">{} ({})</text>"#,
        w / 2.0,
        h - 15.0,
        kind.x_field(),
        kind.name()
    );
    let _ = writeln!(s, r#"<text x="15" y="{}" font-size="14" transform="rotate(-90 15 {})">ratio</text>"#, h / 2.0, h / 2.0);
    for (x, y) in &pts {
        let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="steelblue"/>"#, px(*x), py(*y));
    }
    s.push_str("</svg>\n");
    out.write_all(s.as_bytes()).map_err(io_err)
}
