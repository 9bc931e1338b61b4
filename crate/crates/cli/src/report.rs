//! In-memory tables and their CSV form.

use std::path::{Path, PathBuf};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Text(String),
}

impl Cell {
    /// Scientific notation with 9 significant digits.
    pub fn render(&self) -> String {
        match self {
            Cell::Num(v) => format!("{v:.8e}"),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<&str> for Cell {
    fn from(s: &str) -> Self {
        Cell::Text(s.to_string())
    }
}

impl From<bool> for Cell {
    fn from(b: bool) -> Self {
        Cell::Text(b.to_string())
    }
}

/// One output table; written as `<name>.csv`.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub headers: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, headers: &[&'static str]) -> Self {
        Self {
            name,
            headers: headers.to_vec(),
            rows: Vec::new(),
        }
    }

    /// A `quantity,value,unit` table.
    pub fn quantities(name: &'static str) -> Self {
        Self::new(name, &["quantity", "value", "unit"])
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn quantity(&mut self, name: &str, value: f64, unit: &str) {
        self.push(vec![name.into(), value.into(), unit.into()]);
    }

    /// Value of `quantity` in a `quantity,value,unit` table.
    pub fn value(&self, quantity: &str) -> Option<f64> {
        self.rows.iter().find_map(|row| match (&row[0], &row[1]) {
            (Cell::Text(q), Cell::Num(v)) if q == quantity => Some(*v),
            _ => None,
        })
    }

    /// Numeric column by header.
    pub fn column(&self, header: &str) -> Option<Vec<f64>> {
        let idx = self.headers.iter().position(|h| *h == header)?;
        self.rows
            .iter()
            .map(|row| match &row[idx] {
                Cell::Num(v) => Some(*v),
                Cell::Text(_) => None,
            })
            .collect()
    }

    pub fn to_csv(&self) -> Result<Vec<u8>, CliError> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        w.write_record(&self.headers)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render))?;
        }
        w.into_inner().map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf, CliError> {
        let path = dir.join(format!("{}.csv", self.name));
        std::fs::write(&path, self.to_csv()?)?;
        Ok(path)
    }
}

/// Result of one subcommand.
#[derive(Debug, Clone, Default)]
pub struct Report {
    pub tables: Vec<Table>,
    pub summary: Vec<String>,
    /// Hard validity flags that failed; the report is still written.
    pub failed_flags: Vec<String>,
}

impl Report {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }
}
