//! Deterministic CSV emission: every float printed with 12 significant
//! digits so re-runs byte-reproduce and downstream checks can round-trip the
//! values.

use std::fmt::Write as _;

/// One float, 12 significant digits, scientific notation.
pub fn g12(x: f64) -> String {
    let x = if x == 0.0 { 0.0 } else { x }; // normalize -0.0
    format!("{x:.11e}")
}

#[derive(Debug, Clone)]
pub enum Cell {
    Str(String),
    Float(f64),
    Int(i64),
    Bool(bool),
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Str(s.to_string())
    }
}

impl From<String> for Cell {
    fn from(s: String) -> Self {
        Cell::Str(s)
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as i64)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Bool(x)
    }
}

pub struct Table {
    header: Vec<String>,
    rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new<S: Into<String>>(header: Vec<S>) -> Self {
        Self {
            header: header.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.header.len(), "row width mismatch");
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}", self.header.join(","));
        for row in &self.rows {
            let cells: Vec<String> = row
                .iter()
                .map(|c| match c {
                    Cell::Str(s) => s.clone(),
                    Cell::Float(x) => g12(*x),
                    Cell::Int(i) => i.to_string(),
                    Cell::Bool(b) => b.to_string(),
                })
                .collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }
}
