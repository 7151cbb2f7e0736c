//! Quantitative oracles for the boundedness theorems.
//!
//! On finite spaces every operator is bounded, so each check compares the
//! measured constants against the inequality chain that links them.

mod lemma;
mod norm;
mod theorems;

pub use lemma::{lemma_sweep, lemma_sweep_with, random_chain_masses};
pub use norm::{axis_space, cone_norm_bounds, operator_bound, rayleigh, NormEstimate};
pub use theorems::{
    check_theorem_2_2, check_theorem_3_2, check_theorem_3_4, tree_geodesic_constants,
    GeodesicReport,
};

use serde::Serialize;

use crate::util::ser_f64;

/// Relative slack for comparisons between quantities computed along
/// different floating-point paths.
pub const REL_SLACK: f64 = 1e-9;

/// Data that reproduces a record.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    None,
    Ideal { members: Vec<usize> },
    Function { values: Vec<f64> },
    Masses { values: Vec<f64> },
    Parameters { values: Vec<f64> },
}

#[derive(Debug, Clone, Serialize)]
pub struct Record {
    pub claim: String,
    pub passed: bool,
    #[serde(serialize_with = "ser_f64")]
    pub measured: f64,
    #[serde(serialize_with = "ser_f64")]
    pub bound: f64,
    pub witness: Evidence,
}

#[derive(Debug, Clone, Serialize)]
pub struct EquivalenceReport {
    pub name: String,
    pub records: Vec<Record>,
}

impl EquivalenceReport {
    pub fn new(name: impl Into<String>) -> Self {
        EquivalenceReport {
            name: name.into(),
            records: Vec::new(),
        }
    }

    /// Record `measured <= bound` (up to [`REL_SLACK`] when `slack`).
    pub fn le(
        &mut self,
        claim: impl Into<String>,
        measured: f64,
        bound: f64,
        slack: bool,
        witness: Evidence,
    ) {
        let passed = if slack {
            crate::util::le_rel(measured, bound, REL_SLACK)
        } else {
            measured <= bound
        };
        self.push(claim, passed, measured, bound, witness);
    }

    pub fn push(
        &mut self,
        claim: impl Into<String>,
        passed: bool,
        measured: f64,
        bound: f64,
        witness: Evidence,
    ) {
        self.records.push(Record {
            claim: claim.into(),
            passed,
            measured,
            bound,
            witness,
        });
    }

    pub fn all_passed(&self) -> bool {
        self.records.iter().all(|r| r.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| !r.passed)
    }

    pub fn record(&self, claim: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.claim == claim)
    }
}
