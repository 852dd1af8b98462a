//! Tabular output: every command produces a [`Table`] that is written as CSV
//! or as a JSON array of objects with the same keys.
//!
//! Floats are rendered with 12 significant digits. Every table starts with a
//! `schema_version` column; bump [`SCHEMA_VERSION`] whenever a column is
//! added, removed or renamed.

use std::io::Write;

use serde_json::{Map, Number, Value as Json};

use crate::error::{CliError, Result};

/// Version of the CSV headers and JSON keys.
pub const SCHEMA_VERSION: i64 = 1;

/// Significant digits of rendered floats.
pub const SIG_DIGITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn parse(s: &str) -> Option<Self> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Some(Format::Csv),
            "json" => Some(Format::Json),
            _ => None,
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// One cell.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Bool(bool),
    Text(String),
    Empty,
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<Option<f64>> for Cell {
    fn from(x: Option<f64>) -> Self {
        x.map_or(Cell::Empty, Cell::Float)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<String> for Cell {
    fn from(x: String) -> Self {
        Cell::Text(x)
    }
}

impl Cell {
    fn to_text(&self) -> String {
        match self {
            Cell::Float(x) => fmt_sig(*x),
            Cell::Int(i) => i.to_string(),
            Cell::Bool(b) => b.to_string(),
            Cell::Text(s) => s.clone(),
            Cell::Empty => String::new(),
        }
    }

    fn to_json(&self) -> Json {
        match self {
            Cell::Float(x) => fmt_sig(*x)
                .parse::<f64>()
                .ok()
                .and_then(Number::from_f64)
                .map_or(Json::Null, Json::Number),
            Cell::Int(i) => Json::from(*i),
            Cell::Bool(b) => Json::Bool(*b),
            Cell::Text(s) => Json::String(s.clone()),
            Cell::Empty => Json::Null,
        }
    }
}

/// Renders `x` like C's `%.12g`.
pub fn fmt_sig(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').unwrap_or((&sci, "0"));
    let exp: i32 = exp.parse().unwrap_or(0);
    if exp < -4 || exp >= SIG_DIGITS as i32 {
        let m = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{m}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Rows sharing one header. The first column is always `schema_version`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        let mut cols = vec!["schema_version".to_string()];
        cols.extend(columns.iter().map(|c| c.to_string()));
        Self {
            columns: cols,
            rows: Vec::new(),
        }
    }

    /// Appends a row; `cells` follow the columns after `schema_version`.
    pub fn push(&mut self, cells: Vec<Cell>) {
        debug_assert_eq!(cells.len() + 1, self.columns.len());
        let mut row = Vec::with_capacity(self.columns.len());
        row.push(Cell::Int(SCHEMA_VERSION));
        row.extend(cells);
        self.rows.push(row);
    }

    /// Value of `column` in row `i`.
    pub fn get(&self, i: usize, column: &str) -> Option<&Cell> {
        let j = self.columns.iter().position(|c| c == column)?;
        self.rows.get(i)?.get(j)
    }

    /// Float column as a vector; non-float cells become NaN.
    pub fn floats(&self, column: &str) -> Vec<f64> {
        (0..self.rows.len())
            .map(|i| match self.get(i, column) {
                Some(Cell::Float(x)) => *x,
                _ => f64::NAN,
            })
            .collect()
    }

    pub fn write(&self, format: Format, out: impl Write) -> Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Json => self.write_json(out),
        }
    }

    fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let err = |e: csv::Error| CliError::Output(e.to_string());
        w.write_record(&self.columns).map_err(err)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::to_text)).map_err(err)?;
        }
        w.flush()?;
        Ok(())
    }

    fn write_json(&self, mut out: impl Write) -> Result<()> {
        let records: Vec<Json> = self
            .rows
            .iter()
            .map(|row| {
                let obj: Map<String, Json> = self
                    .columns
                    .iter()
                    .zip(row)
                    .map(|(k, v)| (k.clone(), v.to_json()))
                    .collect();
                Json::Object(obj)
            })
            .collect();
        serde_json::to_writer_pretty(&mut out, &records)
            .map_err(|e| CliError::Output(e.to_string()))?;
        writeln!(out)?;
        Ok(())
    }

    /// The table rendered to a string.
    pub fn render(&self, format: Format) -> Result<String> {
        let mut buf = Vec::new();
        self.write(format, &mut buf)?;
        String::from_utf8(buf).map_err(|e| CliError::Output(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sig_formatting_matches_printf_g() {
        assert_eq!(fmt_sig(0.03), "0.03");
        assert_eq!(fmt_sig(-0.615552411628), "-0.615552411628");
        assert_eq!(fmt_sig(1.0 / 3.0), "0.333333333333");
        assert_eq!(fmt_sig(2.0), "2");
        assert_eq!(fmt_sig(-5.0), "-5");
        assert_eq!(fmt_sig(1e-7), "1e-07");
        assert_eq!(fmt_sig(1.5e15), "1.5e+15");
        assert_eq!(fmt_sig(123456789012.0), "123456789012");
        assert_eq!(fmt_sig(0.1 + 0.2), "0.3");
        assert_eq!(fmt_sig(0.0001), "0.0001");
        assert_eq!(fmt_sig(9.9999999999999e-5), "0.0001");
        assert_eq!(fmt_sig(f64::NAN), "NaN");
    }

    fn table() -> Table {
        let mut t = Table::new(&["beta", "rate", "feasible", "note"]);
        t.push(vec![2.0.into(), (0.1 + 0.2).into(), true.into(), "".into()]);
        t.push(vec![5.0.into(), Cell::Empty, false.into(), "a, b".into()]);
        t
    }

    #[test]
    fn csv_has_versioned_header_and_quotes_commas() {
        let s = table().render(Format::Csv).unwrap();
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines[0], "schema_version,beta,rate,feasible,note");
        assert_eq!(lines[1], "1,2,0.3,true,");
        assert_eq!(lines[2], "1,5,,false,\"a, b\"");
    }

    #[test]
    fn json_mirrors_csv_keys_in_order() {
        let s = table().render(Format::Json).unwrap();
        let v: Json = serde_json::from_str(&s).unwrap();
        let rows = v.as_array().unwrap();
        assert_eq!(rows.len(), 2);
        let keys: Vec<&String> = rows[0].as_object().unwrap().keys().collect();
        assert_eq!(keys, ["schema_version", "beta", "rate", "feasible", "note"]);
        assert_eq!(rows[0]["rate"], Json::from(0.3));
        assert_eq!(rows[1]["rate"], Json::Null);
        assert_eq!(rows[1]["schema_version"], Json::from(1));
    }
}
