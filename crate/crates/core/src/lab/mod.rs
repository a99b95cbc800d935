//! Experiment harness behind the `posmap-lab` command line.
//!
//! Every experiment takes an [`ExperimentConfig`] and returns a [`Report`]
//! `{config, summary, records}`. Trial `i` draws from `stream(seed, i)`, so
//! reports are byte-identical across runs and thread counts.

pub mod cli;
mod duality;
mod files;
mod fuzz;
mod image;
mod repro;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::json;
use crate::matrix::ComplexMatrix;
use crate::verdict::{Status, Verdict};

pub use duality::{duality_check, DualityRecord, DualitySummary};
pub use files::{load_map, load_state, LoadedMap, MapFile, StateFile};
pub use fuzz::{fuzz_ppt2, recheck_fuzz_candidate, FuzzCandidate, FuzzMode, FuzzRecord, FuzzSummary};
pub use image::{image_experiment, ImageCandidate, ImageRecord, ImageSummary};
pub use repro::{
    conjugate_pair_report, noncommuting_quadruple_search, quadruple_element, two_dimensional_block_report,
    ConjugatePairSummary, Quadruple, QuadrupleSummary, TwoDimensionalSummary,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dim: usize,
    pub n_trials: usize,
    pub seed: u64,
    /// Named tolerances overriding the experiment defaults.
    pub tolerances: BTreeMap<String, f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
}

impl ExperimentConfig {
    pub fn new(dim: usize, n_trials: usize, seed: u64) -> Self {
        Self { dim, n_trials, seed, tolerances: BTreeMap::new(), mode: None, output_path: None }
    }

    pub fn with_tolerance(mut self, name: &str, value: f64) -> Self {
        self.tolerances.insert(name.to_string(), value);
        self
    }

    pub fn with_mode(mut self, mode: &str) -> Self {
        self.mode = Some(mode.to_string());
        self
    }

    pub fn tol(&self, name: &str, default: f64) -> f64 {
        self.tolerances.get(name).copied().unwrap_or(default)
    }

    /// `n_trials ≥ 1`, every tolerance finite and positive, `dim` in `dims`.
    pub fn validate(&self, dims: RangeInclusive<usize>) -> Result<()> {
        if !dims.contains(&self.dim) {
            return Err(Error::Invalid(format!(
                "dim must lie in [{}, {}], got {}",
                dims.start(),
                dims.end(),
                self.dim
            )));
        }
        if self.n_trials == 0 {
            return Err(Error::Invalid("n_trials must be at least 1".into()));
        }
        for (name, value) in &self.tolerances {
            if !(value.is_finite() && *value > 0.0) {
                return Err(Error::Invalid(format!("tolerance {name} must be positive, got {value}")));
            }
        }
        Ok(())
    }

    fn check_mode(&self, allowed: &[&str]) -> Result<()> {
        match &self.mode {
            Some(m) if !allowed.contains(&m.as_str()) => {
                Err(Error::Invalid(format!("unknown mode {m}; expected one of {}", allowed.join(", "))))
            }
            _ => Ok(()),
        }
    }
}

/// How an experiment ended; maps onto the process exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Ran,
    InvariantViolation,
    Counterexample,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Ran => 0,
            Outcome::InvariantViolation => 2,
            Outcome::Counterexample => 3,
        }
    }

    pub(crate) fn from_counts(violations: usize, candidates: usize) -> Self {
        if candidates > 0 {
            Outcome::Counterexample
        } else if violations > 0 {
            Outcome::InvariantViolation
        } else {
            Outcome::Ran
        }
    }
}

pub trait HasOutcome {
    fn outcome(&self) -> Outcome;
}

/// Flat row form of a record for CSV output.
pub trait CsvRecord {
    fn header() -> Vec<&'static str>;
    fn row(&self) -> Vec<String>;
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report<S, R> {
    pub config: ExperimentConfig,
    pub summary: S,
    pub records: Vec<R>,
}

impl<S: Serialize, R: Serialize> Report<S, R> {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

impl<S, R: CsvRecord> Report<S, R> {
    pub fn to_csv(&self) -> String {
        to_csv(&self.records)
    }
}

impl<S: HasOutcome, R> HasOutcome for Report<S, R> {
    fn outcome(&self) -> Outcome {
        self.summary.outcome()
    }
}

pub(crate) fn to_csv<R: CsvRecord>(records: &[R]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(R::header()).expect("in-memory write");
    for r in records {
        w.write_record(r.row()).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8 fields")
}

/// Hex SHA-256 of a string.
pub fn fingerprint(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

/// Fingerprint of a matrix in its JSON encoding.
pub fn matrix_fingerprint(m: &ComplexMatrix) -> String {
    fingerprint(&serde_json::to_string(&json::matrix_to_pairs(m)).expect("finite entries"))
}

/// A named pass/fail check of a reproduction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
}

impl Check {
    /// Passes when `value ≤ threshold`.
    pub fn at_most(name: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), passed: value <= threshold, value, threshold }
    }

    /// Passes when `value > threshold`.
    pub fn above(name: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), passed: value > threshold, value, threshold }
    }

    /// Passes when `value ≥ threshold`.
    pub fn at_least(name: &str, value: f64, threshold: f64) -> Self {
        Self { name: name.into(), passed: value >= threshold, value, threshold }
    }

    pub fn equals(name: &str, value: usize, expected: usize) -> Self {
        Self { name: name.into(), passed: value == expected, value: value as f64, threshold: expected as f64 }
    }

    pub fn flag(name: &str, passed: bool) -> Self {
        Self { name: name.into(), passed, value: passed as u8 as f64, threshold: 1.0 }
    }
}

impl CsvRecord for Check {
    fn header() -> Vec<&'static str> {
        vec!["name", "passed", "value", "threshold"]
    }
    fn row(&self) -> Vec<String> {
        vec![self.name.clone(), self.passed.to_string(), self.value.to_string(), self.threshold.to_string()]
    }
}

pub(crate) fn checks_outcome(checks: &[Check]) -> Outcome {
    if checks.iter().all(|c| c.passed) {
        Outcome::Ran
    } else {
        Outcome::InvariantViolation
    }
}

/// A verdict without its certificate payload.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageVerdict {
    pub status: Status,
    pub residual: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub certificate: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl From<&Verdict> for StageVerdict {
    fn from(v: &Verdict) -> Self {
        Self {
            status: v.status,
            residual: v.residual,
            certificate: v.certificate.as_ref().map(|c| c.kind().to_string()),
            note: v.note.clone(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StatusCounts {
    pub certified_yes: usize,
    pub numeric_yes: usize,
    pub inconclusive: usize,
    pub numeric_no: usize,
    pub certified_no: usize,
}

impl StatusCounts {
    pub fn add(&mut self, status: Status) {
        match status {
            Status::CertifiedYes => self.certified_yes += 1,
            Status::NumericYes => self.numeric_yes += 1,
            Status::Inconclusive => self.inconclusive += 1,
            Status::NumericNo => self.numeric_no += 1,
            Status::CertifiedNo => self.certified_no += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.certified_yes + self.numeric_yes + self.inconclusive + self.numeric_no + self.certified_no
    }

    pub fn yes(&self) -> usize {
        self.certified_yes + self.numeric_yes
    }
}

impl FromIterator<Status> for StatusCounts {
    fn from_iter<I: IntoIterator<Item = Status>>(iter: I) -> Self {
        let mut counts = Self::default();
        for s in iter {
            counts.add(s);
        }
        counts
    }
}

pub(crate) fn stage_row(v: &StageVerdict) -> [String; 2] {
    [v.status.to_string(), v.residual.to_string()]
}

/// Human-readable table of named verdicts.
pub fn verdict_table(rows: &[(&str, &Verdict)]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:<24} {:<14} {:>14}  certificate", "property", "status", "residual");
    for (name, v) in rows {
        let kind = v.certificate.as_ref().map_or("-", |c| c.kind());
        let _ = writeln!(out, "{:<24} {:<14} {:>14.6e}  {}", name, v.status.as_str(), v.residual, kind);
    }
    out
}
