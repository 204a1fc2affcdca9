use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::grid::{Field1D, Field2D};

/// Per-step diagnostics of a run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiagnosticsRecord {
    pub t: f64,
    pub mass: f64,
    pub l1: f64,
    pub l2: f64,
    /// Total variation (1D runs only).
    pub tv: Option<f64>,
    /// Kinetic energy for the beam, potential energy for the guiding-center model.
    pub energy: Option<f64>,
    pub min: f64,
    pub max: f64,
}

impl DiagnosticsRecord {
    pub fn from_field1d(t: f64, f: &Field1D) -> Self {
        let n = f.norms();
        Self {
            t,
            mass: n.mass,
            l1: n.l1,
            l2: n.l2,
            tv: n.tv,
            energy: None,
            min: n.min,
            max: n.max,
        }
    }

    pub fn from_field2d(t: f64, f: &Field2D, energy: Option<f64>) -> Self {
        let n = f.norms();
        Self {
            t,
            mass: n.mass,
            l1: n.l1,
            l2: n.l2,
            tv: None,
            energy,
            min: n.min,
            max: n.max,
        }
    }
}

/// `(q - q0) / |q0|`, or `q - q0` when `q0 = 0`.
pub fn relative_change(q: f64, q0: f64) -> f64 {
    if q0 == 0.0 {
        q - q0
    } else {
        (q - q0) / q0.abs()
    }
}

pub const CSV_HEADER: &str = "t,mass,l1,l2,tv,energy,min,max,rel_mass,rel_l1,rel_l2,rel_energy";

/// Diagnostics of a whole run; the first record is the initial state.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct TimeSeries {
    records: Vec<DiagnosticsRecord>,
}

impl TimeSeries {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, r: DiagnosticsRecord) {
        self.records.push(r);
    }

    pub fn records(&self) -> &[DiagnosticsRecord] {
        &self.records
    }

    pub fn last(&self) -> Option<&DiagnosticsRecord> {
        self.records.last()
    }

    /// Relative mass change of every record against the first.
    pub fn relative_mass(&self) -> Vec<f64> {
        let m0 = self.records.first().map_or(0.0, |r| r.mass);
        self.records.iter().map(|r| relative_change(r.mass, m0)).collect()
    }

    /// Relative energy change against the first record, where energies are recorded.
    pub fn relative_energy(&self) -> Vec<Option<f64>> {
        let e0 = self.records.first().and_then(|r| r.energy);
        self.records
            .iter()
            .map(|r| Some(relative_change(r.energy?, e0?)))
            .collect()
    }

    /// Writes the series as CSV with full round-trip precision; missing values are empty.
    pub fn write_csv(&self, mut w: impl Write) -> Result<()> {
        writeln!(w, "{CSV_HEADER}")?;
        let Some(first) = self.records.first() else {
            return Ok(());
        };
        let opt = |v: Option<f64>| v.map(|v| format!("{v:e}")).unwrap_or_default();
        for r in &self.records {
            let rel_energy = match (r.energy, first.energy) {
                (Some(e), Some(e0)) => Some(relative_change(e, e0)),
                _ => None,
            };
            writeln!(
                w,
                "{:e},{:e},{:e},{:e},{},{},{:e},{:e},{:e},{:e},{:e},{}",
                r.t,
                r.mass,
                r.l1,
                r.l2,
                opt(r.tv),
                opt(r.energy),
                r.min,
                r.max,
                relative_change(r.mass, first.mass),
                relative_change(r.l1, first.l1),
                relative_change(r.l2, first.l2),
                opt(rel_energy),
            )?;
        }
        Ok(())
    }
}

/// A numeric CSV table: column names and rows, with empty cells read as NaN.
#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl CsvTable {
    pub fn read(r: impl BufRead) -> Result<Self> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::Format("empty CSV file".into()))??;
        let columns: Vec<String> = header.split(',').map(|s| s.trim().to_string()).collect();
        let mut rows = Vec::new();
        for (k, line) in lines.enumerate() {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            let row = line
                .split(',')
                .map(|c| {
                    let c = c.trim();
                    if c.is_empty() {
                        Ok(f64::NAN)
                    } else {
                        c.parse::<f64>()
                            .map_err(|_| Error::Format(format!("line {}: '{c}' is not a number", k + 2)))
                    }
                })
                .collect::<Result<Vec<f64>>>()?;
            if row.len() != columns.len() {
                return Err(Error::Format(format!(
                    "line {}: {} fields, header has {}",
                    k + 2,
                    row.len(),
                    columns.len()
                )));
            }
            rows.push(row);
        }
        Ok(Self { columns, rows })
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[k]).collect())
    }
}
