//! CSV tables and the pass/fail summary written by scenario runs.

use std::fmt;
use std::path::Path;

use crate::error::Result;

/// A header row and string records.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(header: &[&str]) -> Self {
        Self { header: header.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.header.len());
        self.rows.push(row);
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(&self.header)?;
        for r in &self.rows {
            w.write_record(r)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        let mut r = csv::Reader::from_path(path)?;
        let header = r.headers()?.iter().map(str::to_string).collect();
        let mut rows = Vec::new();
        for rec in r.records() {
            rows.push(rec?.iter().map(str::to_string).collect());
        }
        Ok(Self { header, rows })
    }

    /// Index of a column by name.
    pub fn column(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }
}

/// Formats a real in shortest round-trip form.
pub fn real(x: f64) -> String {
    format!("{x:?}")
}

/// Equalities with a tolerance versus fitted bands with a cap.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Exact,
    Band,
}

impl fmt::Display for CheckKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CheckKind::Exact => "exact",
            CheckKind::Band => "band",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SummaryLine {
    pub check: String,
    pub item: String,
    pub kind: CheckKind,
    pub value: f64,
    /// Human-readable acceptance rule, e.g. `<= 1e-6`.
    pub rule: String,
    pub passed: bool,
}

impl SummaryLine {
    pub fn exact(check: &str, item: &str, value: f64, rule: &str, passed: bool) -> Self {
        Self { check: check.into(), item: item.into(), kind: CheckKind::Exact, value, rule: rule.into(), passed }
    }

    pub fn band(check: &str, item: &str, value: f64, rule: &str, passed: bool) -> Self {
        Self { check: check.into(), item: item.into(), kind: CheckKind::Band, value, rule: rule.into(), passed }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Summary {
    pub lines: Vec<SummaryLine>,
}

impl Summary {
    pub fn passed(&self) -> bool {
        self.lines.iter().all(|l| l.passed)
    }

    pub fn table(&self) -> Table {
        let mut t = Table::new(&["check", "item", "kind", "value", "rule", "status"]);
        for l in &self.lines {
            t.push(vec![
                l.check.clone(),
                l.item.clone(),
                l.kind.to_string(),
                real(l.value),
                l.rule.clone(),
                if l.passed { "pass" } else { "fail" }.into(),
            ]);
        }
        t
    }
}

impl fmt::Display for Summary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.lines {
            writeln!(
                f,
                "{:<4} {:<20} {:<6} {:<40} {:>14.6e}  {}",
                if l.passed { "PASS" } else { "FAIL" },
                l.check,
                l.kind,
                l.item,
                l.value,
                l.rule
            )?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip_with_quoting() {
        let dir = tempfile::tempdir().unwrap();
        let mut t = Table::new(&["name", "value"]);
        t.push(vec!["a, \"quoted\" cell".into(), real(0.1 + 0.2)]);
        t.push(vec!["plain".into(), real(-1e-300)]);
        let p = dir.path().join("t.csv");
        t.write(&p).unwrap();
        let back = Table::read(&p).unwrap();
        assert_eq!(back, t);
        assert_eq!(back.rows[0][1].parse::<f64>().unwrap(), 0.1 + 0.2);
        assert_eq!(back.column("value"), Some(1));
    }
}
