use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use super::config::Format;
use crate::error::{Error, Result};
use crate::fock::DensityMatrix;

/// Marker written in place of quantities that do not exist.
pub const UNDEFINED: &str = "undefined";

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Cell {
    Float(f64),
    Int(usize),
    Undefined,
}

impl Cell {
    pub fn from_result(v: Result<f64>) -> Result<Cell> {
        match v {
            Ok(x) => Ok(Cell::Float(x)),
            Err(Error::Undefined(_)) => Ok(Cell::Undefined),
            Err(e) => Err(e),
        }
    }

    fn csv(self) -> String {
        match self {
            Cell::Float(x) => format_float(x),
            Cell::Int(n) => n.to_string(),
            Cell::Undefined => UNDEFINED.to_string(),
        }
    }

    pub fn json(self) -> Value {
        match self {
            Cell::Float(x) if x.is_finite() => json!(x + 0.0),
            Cell::Float(_) | Cell::Undefined => json!(UNDEFINED),
            Cell::Int(n) => json!(n),
        }
    }
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Float(x)
    }
}

impl From<usize> for Cell {
    fn from(n: usize) -> Self {
        Cell::Int(n)
    }
}

/// Seventeen significant digits in lowercase scientific notation. Negative
/// zero prints as zero; non-finite values print as [`UNDEFINED`].
pub fn format_float(x: f64) -> String {
    if x.is_finite() {
        format!("{:.16e}", x + 0.0)
    } else {
        UNDEFINED.to_string()
    }
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct Table {
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|c| c.csv()).collect();
            let _ = writeln!(out, "{}", cells.join(","));
        }
        out
    }

    /// Array of row objects keyed by column name.
    pub fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| {
                    let obj: Map<String, Value> = self
                        .columns
                        .iter()
                        .zip(row)
                        .map(|(k, c)| (k.to_string(), c.json()))
                        .collect();
                    Value::Object(obj)
                })
                .collect(),
        )
    }

    pub fn render(&self, format: Format) -> Result<String> {
        Ok(match format {
            Format::Csv => self.to_csv(),
            Format::Json => pretty(&self.to_json())?,
        })
    }
}

pub fn pretty(v: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

/// `{dim, data: [[re, im], ...]}` in row-major order.
pub fn density_matrix_json(rho: &DensityMatrix) -> Value {
    let data: Vec<Value> = rho
        .matrix()
        .iter()
        .map(|z| json!([z.re + 0.0, z.im + 0.0]))
        .collect();
    json!({ "dim": rho.dim(), "data": data })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

/// Files written by one command, in order.
#[derive(Clone, Debug, Default)]
pub struct Written {
    pub files: Vec<PathBuf>,
}

impl Written {
    pub fn write(&mut self, dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join(name);
        std::fs::write(&path, contents)?;
        self.files.push(path.clone());
        Ok(path)
    }
}
