//! Run configuration: a flat TOML document with the same keys as the flags.
//!
//! ```toml
//! space = "grid:3x3"
//! weight = "prod:(pow:-0.5,pow:0)"
//! p = [1.0, 2.0]
//! seed = 185
//! ```

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// `chain:N`, `grid:NxM`, `tree:binary:D`, `tree:path:N`,
    /// `tree:random:N`, `blocked:BxC` or `file:<dump>`.
    pub space: String,
    pub weight: String,
    pub p: Vec<f64>,
    /// Ideal count above which suprema are sampled.
    pub ideal_cap: usize,
    /// Candidate functions per norm estimate.
    pub samples: usize,
    pub cells: usize,
    pub truncate: f64,
    pub seed: u64,
    pub mode: String,
    pub variant: String,
    pub beta: Vec<f64>,
    pub alphas: Vec<f64>,
    pub trials: usize,
    pub suite: Option<String>,
    pub kind: Option<String>,
    pub out: Option<String>,
    pub workers: Option<usize>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            space: "chain:100".into(),
            weight: "const:1".into(),
            p: vec![2.0],
            ideal_cap: crate::conditions::DEFAULT_BUDGET,
            samples: 4000,
            cells: 10_000,
            truncate: 100.0,
            seed: 0xB9,
            mode: "full".into(),
            variant: "prec1".into(),
            beta: vec![-0.5, 0.0, 0.5, 1.0],
            alphas: vec![-2.0, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0],
            trials: 1000,
            suite: None,
            kind: None,
            out: None,
            workers: None,
        }
    }
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Usage(format!("config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn emit(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }
}

/// Comma-separated reals; the empty string is the empty list.
pub fn parse_list(s: &str) -> std::result::Result<Vec<f64>, String> {
    if s.trim().is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<f64>()
                .map_err(|_| format!("`{}` is not a number", t.trim()))
        })
        .collect()
}
