use super::csv_error;
use crate::error::Result;
use serde::Serialize;
use std::io::Write;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub label: String,
    pub paper: f64,
    pub computed: f64,
    pub absdiff: f64,
    pub tolerance: f64,
    pub pass: bool,
}

/// Reference-versus-computed rows; a row passes when absdiff ≤ its tolerance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub title: String,
    pub tolerance: f64,
    pub rows: Vec<ComparisonRow>,
}

impl ComparisonReport {
    pub fn new(title: impl Into<String>, tolerance: f64) -> Self {
        ComparisonReport {
            title: title.into(),
            tolerance,
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, label: impl Into<String>, paper: f64, computed: f64) {
        let tol = self.tolerance;
        self.push_with_tolerance(label, paper, computed, tol);
    }

    pub fn push_with_tolerance(
        &mut self,
        label: impl Into<String>,
        paper: f64,
        computed: f64,
        tolerance: f64,
    ) {
        let absdiff = (paper - computed).abs();
        self.rows.push(ComparisonRow {
            label: label.into(),
            paper,
            computed,
            absdiff,
            tolerance,
            pass: absdiff <= tolerance,
        });
    }

    pub fn extend(&mut self, other: ComparisonReport) {
        self.rows.extend(other.rows);
    }

    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &ComparisonRow> {
        self.rows.iter().filter(|r| !r.pass)
    }

    pub fn max_abs_diff(&self) -> f64 {
        self.rows.iter().map(|r| r.absdiff).fold(0.0, f64::max)
    }

    /// The worst row, if any.
    pub fn worst(&self) -> Option<&ComparisonRow> {
        self.rows
            .iter()
            .max_by(|a, b| a.absdiff.total_cmp(&b.absdiff))
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["label", "paper", "computed", "absdiff", "pass"])
            .map_err(csv_error)?;
        for r in &self.rows {
            w.write_record([
                r.label.clone(),
                format!("{:?}", r.paper),
                format!("{:?}", r.computed),
                format!("{:?}", r.absdiff),
                r.pass.to_string(),
            ])
            .map_err(csv_error)?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
