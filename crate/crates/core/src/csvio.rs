//! Plain CSV tables: header row, comma separator, LF line endings, floats
//! in shortest round-trip form.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::spectral::Grid;

/// Relative tolerance on the x column for it to count as a uniform grid.
pub const GRID_TOLERANCE: f64 = 1e-9;

/// Column-major numeric table.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub headers: Vec<String>,
    pub columns: Vec<Vec<f64>>,
}

impl Table {
    pub fn new() -> Self {
        Self {
            headers: Vec::new(),
            columns: Vec::new(),
        }
    }

    pub fn push(&mut self, header: impl Into<String>, column: Vec<f64>) {
        self.headers.push(header.into());
        self.columns.push(column);
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.headers
            .iter()
            .position(|h| h == name)
            .map(|i| self.columns[i].as_slice())
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, Vec::len)
    }

    pub fn to_csv_string(&self) -> String {
        let mut out = self.headers.join(",");
        out.push('\n');
        for row in 0..self.rows() {
            for (i, col) in self.columns.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write!(out, "{}", col[row]).unwrap();
            }
            out.push('\n');
        }
        out
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv_string()).map_err(|e| Error::io(path, e))
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut reader = csv::ReaderBuilder::new()
            .has_headers(true)
            .trim(csv::Trim::All)
            .from_reader(text.as_bytes());
        let headers: Vec<String> = reader
            .headers()
            .map_err(|e| Error::validation(format!("malformed CSV header: {e}")))?
            .iter()
            .map(str::to_owned)
            .collect();
        let mut columns = vec![Vec::new(); headers.len()];
        for (line, record) in reader.records().enumerate() {
            let record = record.map_err(|e| Error::validation(format!("malformed CSV: {e}")))?;
            for (col, field) in columns.iter_mut().zip(record.iter()) {
                let v: f64 = field.parse().map_err(|_| {
                    Error::validation(format!(
                        "malformed CSV: row {} has non-numeric value '{field}'",
                        line + 1
                    ))
                })?;
                col.push(v);
            }
        }
        Ok(Self { headers, columns })
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }
}

impl Default for Table {
    fn default() -> Self {
        Self::new()
    }
}

/// Recovers the periodic grid sampled by an x column, rejecting columns that
/// deviate from uniform spacing by more than [`GRID_TOLERANCE`] · L.
pub fn grid_from_x(x: &[f64]) -> Result<Grid> {
    let n = x.len();
    if n < 2 {
        return Err(Error::validation(format!(
            "x column needs at least {} rows, got {n}",
            Grid::MIN_POINTS
        )));
    }
    let dx = (x[n - 1] - x[0]) / (n - 1) as f64;
    let grid = Grid::new(n, x[0], x[0] + dx * n as f64)?;
    let deviation = x
        .iter()
        .enumerate()
        .map(|(j, &xj)| (xj - grid.point(j)).abs())
        .fold(0.0, f64::max);
    // also rejects a NaN deviation
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    if !(deviation <= GRID_TOLERANCE * grid.length()) {
        return Err(Error::validation(format!(
            "x column is not a uniform grid: max grid deviation {deviation:e}"
        )));
    }
    Ok(grid)
}
