//! Reconciliation of the published closed forms with the oracle.
//!
//! Every check measures the worst deviation of one formula over a fixed
//! sampling set and classifies it as agreeing or discrepant. The committed
//! ledger (`data/ledger.json`) records the expected classification and, for
//! discrepancies, the measured deviation; a run passes when every
//! measurement matches the ledger and every required check agrees.

mod checks;
mod claims;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::oracle::Oracle;
use crate::scan::Scanner;

pub use checks::{all_checks, deviation, CheckSpec, TOLERANCE};
pub use claims::{all_claims, ClaimSpec};

/// The committed discrepancy ledger.
pub const LEDGER_JSON: &str = include_str!("../../data/ledger.json");

/// Relative slack when comparing a measured deviation with the ledger.
pub const LEDGER_DEVIATION_SLACK: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Reference {
    Oracle,
    Transport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Agrees,
    Discrepant,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    pub label: String,
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerCheck {
    pub status: Status,
    /// Worst measured deviation; recorded for discrepancies.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub deviation: Option<f64>,
    #[serde(default)]
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LedgerClaim {
    pub holds: bool,
    #[serde(default)]
    pub note: String,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Ledger {
    pub checks: BTreeMap<String, LedgerCheck>,
    pub claims: BTreeMap<String, LedgerClaim>,
}

impl Ledger {
    pub fn committed() -> Result<Self> {
        Ok(serde_json::from_str(LEDGER_JSON)?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: String,
    pub description: String,
    pub reference: Reference,
    pub tolerance: f64,
    pub required: bool,
    pub samples: Vec<Sample>,
    pub max_deviation: f64,
    pub worst_case: String,
    pub status: Status,
    pub ledger: Option<LedgerCheck>,
    /// Matches the ledger (and agrees, when required).
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClaimResult {
    pub id: String,
    pub statement: String,
    pub measured: f64,
    pub holds: bool,
    pub ledger: Option<LedgerClaim>,
    pub consistent: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub checks: Vec<CheckResult>,
    pub claims: Vec<ClaimResult>,
    pub passed: bool,
}

impl ValidationReport {
    pub fn check(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn claim(&self, id: &str) -> Option<&ClaimResult> {
        self.claims.iter().find(|c| c.id == id)
    }
}

fn check_consistent(status: Status, max_dev: f64, required: bool, ledger: Option<&LedgerCheck>) -> bool {
    if required && status != Status::Agrees {
        return false;
    }
    let Some(entry) = ledger else {
        return required;
    };
    if entry.status != status {
        return false;
    }
    match (status, entry.deviation) {
        (Status::Discrepant, Some(d)) => (max_dev - d).abs() <= LEDGER_DEVIATION_SLACK * d.abs().max(1e-12),
        (Status::Discrepant, None) => false,
        (Status::Agrees, _) => true,
    }
}

pub fn run_check(spec: &CheckSpec, oracle: &Oracle, ledger: &Ledger) -> Result<CheckResult> {
    let samples = (spec.run)(oracle)?;
    let (mut max_dev, mut worst) = (0.0f64, String::new());
    for s in &samples {
        if !(s.deviation <= max_dev) {
            max_dev = s.deviation;
            worst = s.label.clone();
        }
    }
    let status = if max_dev < spec.tolerance { Status::Agrees } else { Status::Discrepant };
    let entry = ledger.checks.get(spec.id).cloned();
    Ok(CheckResult {
        id: spec.id.to_string(),
        description: spec.description.to_string(),
        reference: spec.reference,
        tolerance: spec.tolerance,
        required: spec.required,
        consistent: check_consistent(status, max_dev, spec.required, entry.as_ref()),
        samples,
        max_deviation: max_dev,
        worst_case: worst,
        status,
        ledger: entry,
    })
}

pub fn run_claim(spec: &ClaimSpec, scanner: &Scanner, ledger: &Ledger) -> Result<ClaimResult> {
    let (measured, holds) = (spec.run)(scanner)?;
    let entry = ledger.claims.get(spec.id).cloned();
    Ok(ClaimResult {
        id: spec.id.to_string(),
        statement: spec.statement.to_string(),
        measured,
        holds,
        consistent: entry.as_ref().is_some_and(|e| e.holds == holds),
        ledger: entry,
    })
}

/// Runs every check and claim against the committed ledger.
pub fn validate() -> Result<ValidationReport> {
    validate_with(&Ledger::committed()?)
}

pub fn validate_with(ledger: &Ledger) -> Result<ValidationReport> {
    let scanner = Scanner::default();
    let checks = all_checks()
        .iter()
        .map(|c| run_check(c, &scanner.oracle, ledger))
        .collect::<Result<Vec<_>>>()?;
    let claims = all_claims()
        .iter()
        .map(|c| run_claim(c, &scanner, ledger))
        .collect::<Result<Vec<_>>>()?;
    let passed = checks.iter().all(|c| c.consistent) && claims.iter().all(|c| c.consistent);
    Ok(ValidationReport {
        schema_version: crate::scan::SCHEMA_VERSION,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        checks,
        claims,
        passed,
    })
}

/// Runs [`validate`] and writes the report as JSON to `path`.
pub fn validate_to(path: &Path) -> Result<ValidationReport> {
    let report = validate()?;
    std::fs::write(path, serde_json::to_string_pretty(&report)? + "\n")?;
    Ok(report)
}
