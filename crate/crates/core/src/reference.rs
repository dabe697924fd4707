//! Side-by-side comparison of computed acceptabilities against a published baseline.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::smaa::AcceptabilityReport;

/// One cell: alternative × category.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CellDeviation {
    pub alternative: String,
    pub category: usize,
    pub computed: f64,
    pub reference: f64,
}

impl CellDeviation {
    pub fn delta(&self) -> f64 {
        self.computed - self.reference
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviationReport {
    pub label: String,
    pub cells: Vec<CellDeviation>,
    /// Alternatives present in only one of the two tables.
    pub unmatched: Vec<String>,
}

impl DeviationReport {
    pub fn max_abs_delta(&self) -> f64 {
        self.cells.iter().map(|c| c.delta().abs()).fold(0.0, f64::max)
    }

    pub fn mean_abs_delta(&self) -> f64 {
        if self.cells.is_empty() {
            return 0.0;
        }
        self.cells.iter().map(|c| c.delta().abs()).sum::<f64>() / self.cells.len() as f64
    }

    /// Alternatives whose modal category differs from the reference's.
    pub fn modal_mismatches(&self) -> Vec<(String, usize, usize)> {
        let mut by_alt: BTreeMap<&str, (Vec<f64>, Vec<f64>)> = BTreeMap::new();
        for c in &self.cells {
            let e = by_alt.entry(&c.alternative).or_default();
            e.0.push(c.computed);
            e.1.push(c.reference);
        }
        by_alt
            .into_iter()
            .filter_map(|(alt, (comp, refr))| {
                let (a, b) = (modal(&comp), modal(&refr));
                (a != b).then(|| (alt.to_string(), a, b))
            })
            .collect()
    }
}

fn modal(pi: &[f64]) -> usize {
    let mut best = 0;
    for (k, &p) in pi.iter().enumerate() {
        if p > pi[best] {
            best = k;
        }
    }
    best + 1
}

/// Compares a report cell by cell with a reference table (alternative → π per category).
pub fn compare(report: &AcceptabilityReport, reference: &BTreeMap<String, Vec<f64>>) -> DeviationReport {
    let mut cells = Vec::new();
    let mut unmatched = Vec::new();
    for row in &report.rows {
        match reference.get(&row.alternative) {
            Some(expected) => {
                for (k, (&c, &r)) in row.pi.iter().zip(expected).enumerate() {
                    cells.push(CellDeviation {
                        alternative: row.alternative.clone(),
                        category: k + 1,
                        computed: c,
                        reference: r,
                    });
                }
            }
            None => unmatched.push(row.alternative.clone()),
        }
    }
    for alt in reference.keys() {
        if report.row(alt).is_none() {
            unmatched.push(alt.clone());
        }
    }
    DeviationReport {
        label: report.label.clone(),
        cells,
        unmatched,
    }
}

impl fmt::Display for DeviationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{}: max |Δ| = {:.3}, mean |Δ| = {:.3}",
            self.label,
            self.max_abs_delta(),
            self.mean_abs_delta()
        )?;
        writeln!(
            f,
            "{:<12}{:>5}{:>10}{:>10}{:>9}",
            "alternative", "cat", "computed", "reference", "delta"
        )?;
        for c in &self.cells {
            writeln!(
                f,
                "{:<12}{:>5}{:>10.3}{:>10.3}{:>+9.3}",
                c.alternative,
                format!("C{}", c.category),
                c.computed,
                c.reference,
                c.delta()
            )?;
        }
        for (alt, got, want) in self.modal_mismatches() {
            writeln!(f, "modal mismatch for {alt}: C{got} computed, C{want} in reference")?;
        }
        for alt in &self.unmatched {
            writeln!(f, "no counterpart for {alt}")?;
        }
        Ok(())
    }
}

/// NPV comparison row for one series and severity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NpvDeviation {
    pub series: String,
    pub severity: f64,
    pub computed: f64,
    pub reference: f64,
}

impl NpvDeviation {
    pub fn delta(&self) -> f64 {
        self.computed - self.reference
    }

    pub fn relative(&self) -> f64 {
        if self.reference == 0.0 {
            f64::NAN
        } else {
            self.delta() / self.reference.abs()
        }
    }
}
