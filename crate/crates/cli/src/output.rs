//! CSV and SVG writers.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
    Empty,
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Num(x) => format_float(*x),
            Cell::Int(n) => n.to_string(),
            Cell::Text(s) => quote(s),
            Cell::Empty => String::new(),
        }
    }

    pub fn as_f64(&self) -> Option<f64> {
        match self {
            Cell::Num(x) => Some(*x),
            Cell::Int(n) => Some(*n as f64),
            _ => None,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            Cell::Num(x) if x.is_finite() => serde_json::json!(x),
            Cell::Num(x) => serde_json::json!(x.to_string()),
            Cell::Int(n) => serde_json::json!(n),
            Cell::Text(s) => serde_json::json!(s),
            Cell::Empty => serde_json::Value::Null,
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Num)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

/// 17 significant digits, exponent form; round-trips every finite `f64`.
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

/// RFC 4180 quoting when the field needs it.
pub fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n', '\r']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn to_csv(&self, config_hash: &str) -> String {
        let mut out = String::new();
        writeln!(out, "# config_hash={config_hash}").unwrap();
        let header: Vec<String> = self.columns.iter().map(|c| quote(c)).collect();
        out.push_str(&header.join(","));
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::render).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn write_csv(&self, path: &Path, config_hash: &str) -> Result<(), CliError> {
        std::fs::write(path, self.to_csv(config_hash)).map_err(|e| CliError::io(path, e))
    }
}

const PALETTE: [&str; 6] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"];

/// Line plot of `ys` against the table's first column.
pub fn svg_plot(table: &Table, ys: &[String]) -> Result<String, CliError> {
    let (w, h, pad) = (720.0, 440.0, 50.0);
    let xs: Vec<Option<f64>> = table.rows.iter().map(|r| r[0].as_f64()).collect();
    let mut series = Vec::new();
    for name in ys {
        let k = table
            .column(name)
            .ok_or_else(|| CliError::Schema(format!("plot column '{name}' not in output")))?;
        let pts: Vec<(f64, f64)> = table
            .rows
            .iter()
            .zip(&xs)
            .filter_map(|(r, x)| Some((((*x)?), r[k].as_f64()?)))
            .filter(|(x, y)| x.is_finite() && y.is_finite())
            .collect();
        series.push((name, pts));
    }
    let all = series.iter().flat_map(|s| s.1.iter());
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !(x0 < x1) {
        (x0, x1) = (x0.min(0.0), x0.max(0.0) + 1.0);
    }
    if !(y0 < y1) {
        let c = if y0.is_finite() { y0 } else { 0.0 };
        (y0, y1) = (c - 1.0, c + 1.0);
    }
    let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);

    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#).unwrap();
    writeln!(s, r#"<rect width="100%" height="100%" fill="white"/>"#).unwrap();
    writeln!(
        s,
        r#"<rect x="{pad}" y="{pad}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        w - 2.0 * pad,
        h - 2.0 * pad
    )
    .unwrap();
    let label = |v: f64| format!("{v:.3e}");
    writeln!(s, r#"<text x="{pad}" y="{}" font-size="11">{}</text>"#, h - pad + 15.0, label(x0)).unwrap();
    writeln!(s, r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>"#, w - pad, h - pad + 15.0, label(x1)).unwrap();
    writeln!(s, r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>"#, pad - 4.0, h - pad, label(y0)).unwrap();
    writeln!(s, r#"<text x="{}" y="{}" font-size="11" text-anchor="end">{}</text>"#, pad - 4.0, pad + 10.0, label(y1)).unwrap();
    writeln!(s, r#"<text x="{}" y="{}" font-size="12" text-anchor="middle">{}</text>"#, w / 2.0, h - 12.0, escape(&table.columns[0])).unwrap();
    for (i, (name, pts)) in series.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        let path: Vec<String> = pts.iter().map(|&(x, y)| format!("{:.2},{:.2}", sx(x), sy(y))).collect();
        writeln!(s, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, path.join(" ")).unwrap();
        writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="12" fill="{color}">{}</text>"#,
            w - pad - 120.0,
            pad + 16.0 * (i as f64 + 1.0),
            escape(name)
        )
        .unwrap();
    }
    s.push_str("</svg>\n");
    Ok(s)
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 6.02214076e23, 0.0] {
            let s = format_float(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
        }
        assert_eq!(format_float(1.0), "1.0000000000000000e0");
    }

    #[test]
    fn quoting() {
        assert_eq!(quote("plain"), "plain");
        assert_eq!(quote("a,b"), "\"a,b\"");
        assert_eq!(quote("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn csv_layout() {
        let mut t = Table::new(&["t", "note"]);
        t.push(vec![Cell::Num(0.5), Cell::Text("x,y".into())]);
        let csv = t.to_csv("abc");
        assert_eq!(csv, "# config_hash=abc\nt,note\n5.0000000000000000e-1,\"x,y\"\n");
        assert!(!csv.contains('\r'));
    }

    #[test]
    fn svg_rejects_unknown_column() {
        let t = Table::new(&["t", "x"]);
        assert!(svg_plot(&t, &["y".into()]).is_err());
        assert!(svg_plot(&t, &["x".into()]).unwrap().starts_with("<svg"));
    }
}
