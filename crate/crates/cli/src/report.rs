//! Convergence tables and time-series comparison.

use std::fmt::Write as _;
use std::path::Path;

use hwk::error::Result;
use hwk::models::CsvTable;

/// One resolution of a convergence study.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceRow {
    pub n: usize,
    pub l1_error: f64,
    /// `log2(e_{n/2} / e_n)`, present only when the previous row has exactly half the nodes.
    pub order: Option<f64>,
    pub tv_error: f64,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConvergenceReport {
    pub label: String,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    pub fn new(label: impl Into<String>) -> Self {
        Self {
            label: label.into(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, n: usize, l1_error: f64, tv_error: f64) {
        let order = self
            .rows
            .last()
            .filter(|prev| 2 * prev.n == n)
            .map(|prev| (prev.l1_error / l1_error).log2());
        self.rows.push(ConvergenceRow {
            n,
            l1_error,
            order,
            tv_error,
        });
    }

    pub fn orders(&self) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.order).collect()
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("n,l1_error,order,tv_error\n");
        for r in &self.rows {
            let order = r.order.map(|o| format!("{o:e}")).unwrap_or_default();
            let _ = writeln!(s, "{},{:e},{order},{:e}", r.n, r.l1_error, r.tv_error);
        }
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("{}\n", self.label);
        let _ = writeln!(s, "{:>8}  {:>12}  {:>6}  {:>12}", "n", "L1 error", "order", "TV error");
        for r in &self.rows {
            let order = r.order.map(|o| format!("{o:.2}")).unwrap_or_else(|| "-".into());
            let _ = writeln!(s, "{:>8}  {:>12.3e}  {:>6}  {:>12.3e}", r.n, r.l1_error, order, r.tv_error);
        }
        s
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join("convergence.csv"), self.to_csv())?;
        std::fs::write(dir.join("convergence.txt"), self.to_text())?;
        Ok(())
    }
}

/// Largest difference found between two tables.
#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub max_diff: f64,
    /// `(row, column)` of the largest difference.
    pub location: Option<(usize, String)>,
    pub within_tolerance: bool,
    /// Structural mismatch (columns or row counts differ).
    pub mismatch: Option<String>,
}

/// Compares two numeric tables cell by cell with `|a - b| <= tol * max(1, |a|, |b|)`;
/// two empty cells compare equal.
pub fn compare_tables(a: &CsvTable, b: &CsvTable, tol: f64) -> Comparison {
    let structural = if a.columns != b.columns {
        Some(format!("columns differ: [{}] vs [{}]", a.columns.join(","), b.columns.join(",")))
    } else if a.rows.len() != b.rows.len() {
        Some(format!("row counts differ: {} vs {}", a.rows.len(), b.rows.len()))
    } else {
        None
    };
    if let Some(m) = structural {
        return Comparison {
            max_diff: f64::INFINITY,
            location: None,
            within_tolerance: false,
            mismatch: Some(m),
        };
    }
    let mut max_diff = 0.0f64;
    let mut location = None;
    let mut ok = true;
    for (r, (ra, rb)) in a.rows.iter().zip(&b.rows).enumerate() {
        for (c, (&x, &y)) in ra.iter().zip(rb).enumerate() {
            let (diff, scale) = match (x.is_nan(), y.is_nan()) {
                (true, true) => (0.0, 1.0),
                (false, false) => ((x - y).abs(), 1.0f64.max(x.abs()).max(y.abs())),
                _ => (f64::INFINITY, 1.0),
            };
            if diff > max_diff {
                max_diff = diff;
                location = Some((r, a.columns[c].clone()));
            }
            if diff > tol * scale {
                ok = false;
            }
        }
    }
    Comparison {
        max_diff,
        location,
        within_tolerance: ok,
        mismatch: None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn orders_only_between_doubled_resolutions() {
        let mut r = ConvergenceReport::new("test");
        r.push(100, 1e-4, 0.0);
        r.push(200, 1.25e-5, 0.0);
        r.push(300, 1e-6, 0.0);
        r.push(600, 1.25e-7, 0.0);
        assert_eq!(r.rows[0].order, None);
        assert!((r.rows[1].order.unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(r.rows[2].order, None);
        assert!((r.rows[3].order.unwrap() - 3.0).abs() < 1e-12);
        let csv = r.to_csv();
        assert!(csv.starts_with("n,l1_error,order,tv_error\n100,1e-4,,0e0\n"));
        assert!(r.to_text().contains("3.00"));
    }

    #[test]
    fn comparison_respects_tolerance_and_structure() {
        let a = CsvTable::read("t,x\n0,1\n1,2\n".as_bytes()).unwrap();
        let b = CsvTable::read("t,x\n0,1\n1,2.000001\n".as_bytes()).unwrap();
        assert!(compare_tables(&a, &a, 0.0).within_tolerance);
        let c = compare_tables(&a, &b, 1e-9);
        assert!(!c.within_tolerance);
        assert_eq!(c.location, Some((1, "x".to_string())));
        assert!(compare_tables(&a, &b, 1e-5).within_tolerance);
        let d = CsvTable::read("t,y\n0,1\n1,2\n".as_bytes()).unwrap();
        assert!(compare_tables(&a, &d, 1.0).mismatch.is_some());
    }
}
