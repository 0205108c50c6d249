//! Machine-readable analysis reports.
//!
//! A report is deterministic for fixed inputs: maps are ordered and no
//! timestamps or host details are recorded.

use std::collections::BTreeMap;

use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};

pub const TOOL_NAME: &str = "zeroclass";
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// A numeric table, written as one CSV file.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn new<S: Into<String>>(columns: impl IntoIterator<Item = S>) -> Self {
        Self {
            columns: columns.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::invalid(format!(
                "row has {} values, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

/// Where a profile was sampled.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridInfo {
    /// Name of the abscissa (`eta`, `r`, `tau`, ...).
    pub variable: String,
    pub min: f64,
    pub max: f64,
    pub points: usize,
    /// Points per decade for geometric grids, absent for explicit lists.
    pub per_decade: Option<usize>,
}

impl GridInfo {
    pub fn geometric(variable: &str, min: f64, max: f64, per_decade: usize, points: usize) -> Self {
        Self {
            variable: variable.to_string(),
            min,
            max,
            points,
            per_decade: Some(per_decade),
        }
    }

    pub fn explicit(variable: &str, values: &[f64]) -> Self {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Self {
            variable: variable.to_string(),
            min,
            max,
            points: values.len(),
            per_decade: None,
        }
    }

    pub fn describe(&self) -> String {
        match self.per_decade {
            Some(p) => format!(
                "{} in [{:e}, {:e}], {} points, {} per decade",
                self.variable, self.min, self.max, self.points, p
            ),
            None => format!(
                "{} in [{:e}, {:e}], {} explicit points",
                self.variable, self.min, self.max, self.points
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerdictEntry {
    pub verdict: String,
    pub heuristic: bool,
    pub grid: GridInfo,
    /// Trend ratios and thresholds behind the verdict.
    pub details: Value,
}

impl VerdictEntry {
    /// One-line human-readable form.
    pub fn line(&self, name: &str) -> String {
        let tag = if self.heuristic { "heuristic" } else { "exact" };
        format!("{name}: {} ({tag}; {})", self.verdict, self.grid.describe())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Provenance {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub modes: Option<usize>,
    pub truncation: Option<String>,
    /// Flags that shaped the computation, as given.
    pub parameters: BTreeMap<String, Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnalysisReport {
    pub system_label: String,
    /// Table name to table; each becomes `<name>.csv`.
    pub profiles: BTreeMap<String, Table>,
    pub verdicts: BTreeMap<String, VerdictEntry>,
    /// Scalar results (constants, fitted exponents, ...).
    pub summary: BTreeMap<String, Value>,
    pub provenance: Provenance,
}

impl AnalysisReport {
    pub fn new(command: &str, system_label: impl Into<String>) -> Self {
        Self {
            system_label: system_label.into(),
            profiles: BTreeMap::new(),
            verdicts: BTreeMap::new(),
            summary: BTreeMap::new(),
            provenance: Provenance {
                tool: TOOL_NAME.to_string(),
                version: TOOL_VERSION.to_string(),
                command: command.to_string(),
                modes: None,
                truncation: None,
                parameters: BTreeMap::new(),
            },
        }
    }

    pub fn add_table(&mut self, name: &str, table: Table) {
        self.profiles.insert(name.to_string(), table);
    }

    pub fn add_verdict(&mut self, name: &str, entry: VerdictEntry) {
        self.verdicts.insert(name.to_string(), entry);
    }

    pub fn set_summary(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        let v = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        self.summary.insert(key.to_string(), v);
        Ok(())
    }

    pub fn set_parameter(&mut self, key: &str, value: impl Serialize) -> Result<()> {
        let v = serde_json::to_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        self.provenance.parameters.insert(key.to_string(), v);
        Ok(())
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(e.to_string()))
    }
}

/// Serializes any value into JSON for the `details` field.
pub fn details(value: impl Serialize) -> Value {
    serde_json::to_value(value).unwrap_or(Value::Null)
}
