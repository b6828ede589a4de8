//! Verification reports and their serialized forms.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::config::Config;

pub const SCHEMA: &str = "v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub id: String,
    pub description: String,
    pub value: f64,
    pub reference: f64,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn with_residual(id: String, description: String, value: f64, reference: f64, residual: f64, tolerance: f64) -> Self {
        // NaN residuals fail
        let pass = residual <= tolerance;
        Check { id, description, value, reference, residual, tolerance, pass }
    }

    /// `|value - reference| ≤ tolerance`.
    pub fn close(id: impl Into<String>, description: impl Into<String>, value: f64, reference: f64, tolerance: f64) -> Self {
        Self::with_residual(id.into(), description.into(), value, reference, (value - reference).abs(), tolerance)
    }

    /// `|value/reference - 1| ≤ tolerance`.
    pub fn relative(id: impl Into<String>, description: impl Into<String>, value: f64, reference: f64, tolerance: f64) -> Self {
        let residual = (value - reference).abs() / reference.abs();
        Self::with_residual(id.into(), description.into(), value, reference, residual, tolerance)
    }

    /// `value ≥ bound`; the residual is the shortfall.
    pub fn at_least(id: impl Into<String>, description: impl Into<String>, value: f64, bound: f64) -> Self {
        let residual = if value.is_nan() { f64::NAN } else { (bound - value).max(0.0) };
        Self::with_residual(id.into(), description.into(), value, bound, residual, 0.0)
    }

    /// `value ≤ bound`; the residual is the excess.
    pub fn at_most(id: impl Into<String>, description: impl Into<String>, value: f64, bound: f64) -> Self {
        let residual = if value.is_nan() { f64::NAN } else { (value - bound).max(0.0) };
        Self::with_residual(id.into(), description.into(), value, bound, residual, 0.0)
    }
}

/// One line of the data CSV written by `verify --csv`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub r: f64,
    pub quantity: &'static str,
    pub value: f64,
    pub reference: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub suite: String,
    pub space: String,
    pub timestamp: String,
    pub config: Config,
    /// Parts of the suite that do not apply to the space, with the reason.
    pub skipped: Vec<String>,
    pub checks: Vec<Check>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports contain only serializable data")
    }

    /// Fixed-width pass/fail table.
    pub fn write_table<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        let width = self.checks.iter().map(|c| c.id.len()).max().unwrap_or(2).max(2);
        writeln!(out, "suite {} on {}", self.suite, self.space)?;
        writeln!(out, "{:<4} {:<width$} {:>12} {:>12} {:>10} {:>10}", "", "id", "value", "reference", "residual", "tolerance")?;
        for c in &self.checks {
            writeln!(
                out,
                "{:<4} {:<width$} {:>12.5e} {:>12.5e} {:>10.2e} {:>10.2e}",
                if c.pass { "PASS" } else { "FAIL" },
                c.id,
                c.value,
                c.reference,
                c.residual,
                c.tolerance
            )?;
        }
        for s in &self.skipped {
            writeln!(out, "SKIP {s}")?;
        }
        writeln!(out, "{} checks, {} failed", self.checks.len(), self.failures())
    }
}

/// RFC 3339 UTC time, or `SOURCE_DATE_EPOCH` when set.
pub fn timestamp() -> String {
    use time::format_description::well_known::Rfc3339;
    use time::OffsetDateTime;
    let now = std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.parse::<i64>().ok())
        .and_then(|s| OffsetDateTime::from_unix_timestamp(s).ok())
        .unwrap_or_else(OffsetDateTime::now_utc);
    now.format(&Rfc3339).unwrap_or_default()
}
