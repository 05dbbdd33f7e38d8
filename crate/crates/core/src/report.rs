//! Structured verification results.
//!
//! Residuals and tolerances are stored as decimal strings carrying the full
//! working precision, so a report written to disk is the record of the run.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measures::{rational_decimal, MeasureSpec};
use crate::mpnum::BigReal;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellParams {
    pub a: String,
    pub beta: String,
    pub lattice: String,
    pub tau: Option<String>,
}

impl From<&MeasureSpec> for CellParams {
    fn from(spec: &MeasureSpec) -> Self {
        CellParams {
            a: rational_decimal(spec.a_exact()),
            beta: rational_decimal(spec.beta_exact()),
            lattice: spec.lattice().name().to_string(),
            tau: spec.tau_exact().map(rational_decimal),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub params: CellParams,
    pub n: i64,
    /// What was checked, e.g. `"discrete2"`.
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub label: String,
    /// Magnitudes `|r|`.
    pub residuals: Vec<String>,
    pub tol: String,
    pub pass: bool,
}

impl Cell {
    /// Passes iff every residual is finite and `|r| <= tol`.
    pub fn new(params: CellParams, n: i64, label: impl Into<String>, residuals: &[BigReal], tol: &BigReal) -> Cell {
        let pass = residuals.iter().all(|r| r.is_finite() && r.abs() <= *tol);
        Cell {
            params,
            n,
            label: label.into(),
            residuals: residuals.iter().map(|r| format_full(&r.abs())).collect(),
            tol: format_short(tol),
            pass,
        }
    }

    /// A cell recording a failure that produced no residual, such as a
    /// singular recursion step.
    pub fn failed(params: CellParams, n: i64, label: impl Into<String>, tol: &BigReal) -> Cell {
        Cell {
            params,
            n,
            label: label.into(),
            residuals: Vec::new(),
            tol: format_short(tol),
            pass: false,
        }
    }

    /// Largest residual as `f64`, for display only.
    pub fn max_residual_f64(&self) -> f64 {
        self.residuals
            .iter()
            .filter_map(|s| s.parse::<f64>().ok())
            .fold(0.0, f64::max)
    }
}

fn format_full(x: &BigReal) -> String {
    x.to_decimal(BigReal::digits_for_prec(x.prec()))
}

fn format_short(x: &BigReal) -> String {
    x.to_decimal(6)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub prec_bits: u32,
    pub cells: Vec<Cell>,
    /// Conjunction of the cell flags.
    pub pass: bool,
    /// Seconds.
    #[serde(default)]
    pub wall_time: f64,
}

impl VerificationReport {
    pub fn new(suite: impl Into<String>, prec_bits: u32) -> Self {
        VerificationReport {
            suite: suite.into(),
            prec_bits,
            cells: Vec::new(),
            pass: true,
            wall_time: 0.0,
        }
    }

    pub fn push(&mut self, cell: Cell) {
        self.pass &= cell.pass;
        self.cells.push(cell);
    }

    pub fn extend(&mut self, cells: impl IntoIterator<Item = Cell>) {
        for c in cells {
            self.push(c);
        }
    }

    pub fn timed(mut self, started: Instant) -> Self {
        self.wall_time = started.elapsed().as_secs_f64();
        self
    }

    pub fn failures(&self) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(|c| !c.pass)
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Schema(e.to_string()))
    }

    /// Parses a report and checks that `pass` agrees with the cells.
    pub fn from_json(s: &str) -> Result<Self> {
        let r: VerificationReport = serde_json::from_str(s).map_err(|e| Error::Schema(e.to_string()))?;
        if r.pass != r.cells.iter().all(|c| c.pass) {
            return Err(Error::Schema("report pass flag disagrees with its cells".into()));
        }
        Ok(r)
    }

    /// One line per report: suite, verdict, cell count and time.
    pub fn summary_line(&self) -> String {
        let failed = self.failures().count();
        format!(
            "{} {}: {} cells, {} failed, {:.2}s",
            self.suite,
            if self.pass { "PASS" } else { "FAIL" },
            self.cells.len(),
            failed,
            self.wall_time
        )
    }
}

/// Concatenates reports. The empty merge passes. All inputs must share
/// `prec_bits`; suite names are joined with `+` when they differ.
pub fn merge(reports: &[VerificationReport]) -> Result<VerificationReport> {
    let Some(first) = reports.first() else {
        return Ok(VerificationReport::new("", 0));
    };
    let mut names: Vec<&str> = Vec::new();
    for r in reports {
        if r.prec_bits != first.prec_bits {
            return Err(Error::Schema(format!(
                "cannot merge reports at {} and {} bits",
                first.prec_bits, r.prec_bits
            )));
        }
        if !names.contains(&r.suite.as_str()) {
            names.push(&r.suite);
        }
    }
    let mut out = VerificationReport::new(names.join("+"), first.prec_bits);
    for r in reports {
        out.extend(r.cells.iter().cloned());
        out.pass &= r.pass;
        out.wall_time += r.wall_time;
    }
    Ok(out)
}
