//! Deterministic report rendering: JSON with sorted keys, CSV with a fixed
//! column order and LF line ends, Markdown tables. Reals carry 12 significant
//! digits everywhere.

use clap::ValueEnum;
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Md,
}

#[derive(Debug, Error)]
pub enum EmitError {
    #[error("format {} is not supported for this report", .0.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default())]
    Unsupported(Format),
    #[error("serialization failed: {0}")]
    Json(#[from] serde_json::Error),
}

/// Rows with a fixed header.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Table {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.header.join(",");
        out.push('\n');
        for row in &self.rows {
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_markdown(&self) -> String {
        let mut out = format!("| {} |\n", self.header.join(" | "));
        out.push_str(&format!("|{}\n", "---|".repeat(self.header.len())));
        for row in &self.rows {
            out.push_str(&format!("| {} |\n", row.join(" | ")));
        }
        out
    }
}

/// Something the CLI can print.
pub trait Report: Serialize {
    /// The CSV view, if the report is tabular.
    fn table(&self) -> Option<Table> {
        None
    }

    fn markdown(&self) -> Result<String, EmitError> {
        if let Some(t) = self.table() {
            return Ok(t.to_markdown());
        }
        let value = normalized(self)?;
        let mut t = Table::new(&["field", "value"]);
        if let Value::Object(map) = value {
            for (k, v) in map {
                t.push(vec![k, plain(&v)]);
            }
        }
        Ok(t.to_markdown())
    }
}

/// `x` rounded to 12 significant digits, printed in shortest form.
pub fn real(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let r = round12(x);
    let a = r.abs();
    if a != 0.0 && !(1e-4..1e15).contains(&a) {
        format!("{r:e}")
    } else {
        r.to_string()
    }
}

fn round12(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.11e}").parse().unwrap_or(x)
}

fn round_value(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            if let Some(r) = n.as_f64().and_then(|x| serde_json::Number::from_f64(round12(x))) {
                *n = r;
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(round_value),
        Value::Object(m) => m.values_mut().for_each(round_value),
        _ => {}
    }
}

/// The report as JSON with reals rounded. Object keys come out sorted.
pub fn normalized<R: Serialize + ?Sized>(report: &R) -> Result<Value, EmitError> {
    let mut v = serde_json::to_value(report)?;
    round_value(&mut v);
    Ok(v)
}

/// A JSON value as a single table cell.
pub fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        Value::Null => String::new(),
        other => other.to_string(),
    }
}

pub fn emit<R: Report>(report: &R, format: Format) -> Result<String, EmitError> {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&normalized(report)?)?;
            s.push('\n');
            Ok(s)
        }
        Format::Csv => report
            .table()
            .map(|t| t.to_csv())
            .ok_or(EmitError::Unsupported(format)),
        Format::Md => report.markdown(),
    }
}
