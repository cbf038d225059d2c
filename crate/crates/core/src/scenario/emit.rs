//! CSV and JSON-lines writers for result tables.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde_json::{json, Map, Value};

use super::{Cell, ResultTable, ScenarioError};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    JsonLines,
}

/// 17 significant digits, enough to round-trip any f64.
fn float(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        x.to_string()
    }
}

fn csv_fields(table: &ResultTable, row: &[Cell]) -> Vec<String> {
    row.iter()
        .enumerate()
        .flat_map(|(i, c)| match c {
            Cell::Int(n) => vec![n.to_string()],
            Cell::Real(x) if table.is_complex(i) => vec![float(*x), float(0.0)],
            Cell::Real(x) => vec![float(*x)],
            Cell::Complex(z) => vec![float(z.re), float(z.im)],
            Cell::Text(s) => vec![s.clone()],
        })
        .collect()
}

fn json_number(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

fn json_row(table: &ResultTable, row: &[Cell]) -> Value {
    let mut obj = Map::new();
    for (i, (name, c)) in table.columns.iter().zip(row).enumerate() {
        match c {
            Cell::Int(n) => {
                obj.insert(name.clone(), json!(n));
            }
            Cell::Real(x) if table.is_complex(i) => {
                obj.insert(format!("{name}_re"), json_number(*x));
                obj.insert(format!("{name}_im"), json_number(0.0));
            }
            Cell::Real(x) => {
                obj.insert(name.clone(), json_number(*x));
            }
            Cell::Complex(z) => {
                obj.insert(format!("{name}_re"), json_number(z.re));
                obj.insert(format!("{name}_im"), json_number(z.im));
            }
            Cell::Text(s) => {
                obj.insert(name.clone(), Value::String(s.clone()));
            }
        }
    }
    Value::Object(obj)
}

/// Write `table` to `out`. CSV gets a header row; JSON lines get a leading
/// `{"metadata": {...}}` object and then one object per row.
pub fn emit<W: Write>(table: &ResultTable, format: Format, out: W) -> io::Result<()> {
    match format {
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(table.expanded_header())?;
            for row in &table.rows {
                w.write_record(csv_fields(table, row))?;
            }
            w.flush()
        }
        Format::JsonLines => {
            let mut out = out;
            let meta: Map<String, Value> = table
                .metadata
                .iter()
                .map(|(k, v)| (k.clone(), Value::String(v.clone())))
                .collect();
            writeln!(out, "{}", json!({ "metadata": meta }))?;
            for row in &table.rows {
                writeln!(out, "{}", json_row(table, row))?;
            }
            out.flush()
        }
    }
}

pub fn emit_to_path(table: &ResultTable, format: Format, path: &Path) -> Result<(), ScenarioError> {
    let io_err = |e: io::Error| ScenarioError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    };
    let file = File::create(path).map_err(io_err)?;
    emit(table, format, BufWriter::new(file)).map_err(io_err)
}
