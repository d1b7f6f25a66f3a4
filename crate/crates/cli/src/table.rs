//! Column-ordered tables with CSV and JSON emission.
//!
//! Floats are rendered through `Display`, which in Rust is the shortest
//! decimal that round-trips, so emitted files are deterministic and
//! parsing them back recovers the original bits.

use std::fs::File;
use std::io;
use std::path::Path;

/// One table entry.
#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(i64),
    Text(String),
    Bool(bool),
    /// Rendered as an empty field (absent optional values).
    Empty,
}

impl Cell {
    pub fn render(&self) -> String {
        match self {
            Cell::Float(v) => format!("{v}"),
            Cell::Int(v) => format!("{v}"),
            Cell::Text(s) => s.clone(),
            Cell::Bool(b) => format!("{b}"),
            Cell::Empty => String::new(),
        }
    }

    pub fn opt_float(v: Option<f64>) -> Cell {
        match v {
            Some(v) => Cell::Float(v),
            None => Cell::Empty,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

/// Rows under a fixed header.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    columns: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Self {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn columns(&self) -> &[String] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<Cell>] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn write_csv(&self, path: &Path) -> io::Result<()> {
        let mut writer = csv::Writer::from_writer(File::create(path)?);
        writer.write_record(&self.columns)?;
        for row in &self.rows {
            writer.write_record(row.iter().map(Cell::render))?;
        }
        writer.flush()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let rows: Vec<serde_json::Value> = self
            .rows
            .iter()
            .map(|row| {
                serde_json::Value::Array(
                    row.iter()
                        .map(|cell| match cell {
                            Cell::Float(v) => serde_json::json!(v),
                            Cell::Int(v) => serde_json::json!(v),
                            Cell::Text(s) => serde_json::json!(s),
                            Cell::Bool(b) => serde_json::json!(b),
                            Cell::Empty => serde_json::Value::Null,
                        })
                        .collect(),
                )
            })
            .collect();
        serde_json::json!({ "columns": self.columns, "rows": rows })
    }

    pub fn write_json(&self, path: &Path) -> io::Result<()> {
        let text = serde_json::to_string_pretty(&self.to_json()).expect("table is serializable");
        std::fs::write(path, text + "\n")
    }
}

/// Read a CSV back as (header, string rows); test helper for round trips.
pub fn read_csv(path: &Path) -> io::Result<(Vec<String>, Vec<Vec<String>>)> {
    let mut reader = csv::Reader::from_reader(File::open(path)?);
    let header = reader
        .headers()?
        .iter()
        .map(|s| s.to_string())
        .collect();
    let mut rows = Vec::new();
    for record in reader.records() {
        rows.push(record?.iter().map(|s| s.to_string()).collect());
    }
    Ok((header, rows))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trips_floats_bit_exactly() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let values = [
            0.1,
            1.0 / 3.0,
            core::f64::consts::PI,
            6.058747703222114,
            -0.0,
            1e-300,
            12345.678901234567,
        ];
        let mut table = Table::new(&["v"]);
        for v in values {
            table.push(vec![Cell::Float(v)]);
        }
        table.write_csv(&path).unwrap();
        let (header, rows) = read_csv(&path).unwrap();
        assert_eq!(header, vec!["v".to_string()]);
        for (row, original) in rows.iter().zip(values) {
            let parsed: f64 = row[0].parse().unwrap();
            assert_eq!(parsed.to_bits(), original.to_bits(), "{}", row[0]);
        }
    }

    #[test]
    fn empty_cells_render_empty() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.csv");
        let mut table = Table::new(&["a", "b"]);
        table.push(vec![Cell::opt_float(None), Cell::Bool(true)]);
        table.write_csv(&path).unwrap();
        let (_, rows) = read_csv(&path).unwrap();
        assert_eq!(rows[0], vec!["".to_string(), "true".to_string()]);
    }

    #[test]
    fn json_shape() {
        let mut table = Table::new(&["a", "b"]);
        table.push(vec![Cell::Int(1), Cell::Empty]);
        let v = table.to_json();
        assert_eq!(v["columns"][0], "a");
        assert_eq!(v["rows"][0][0], 1);
        assert!(v["rows"][0][1].is_null());
    }
}
