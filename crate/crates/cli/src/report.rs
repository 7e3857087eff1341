//! The JSON run report. Field layout is pinned by the committed schema file
//! (`schema/report.schema.json`); `timings` is the only part that varies
//! between identical runs.

use std::path::Path;

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};

use anosov::analysis::{
    AccessChain, DivergenceReport, HyperbolicityReport, ProlongationalSet, TimeDirection,
};
use anosov::plane::Point;

use crate::config::RunConfig;

pub const REPORT_SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub versions: Versions,
    pub seed: u64,
    /// Value of ANOSOV_THREADS when set.
    pub threads: Option<usize>,
    pub config: RunConfig,
    pub results: Results,
    pub passed: bool,
    pub timings: Timings,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Versions {
    pub anosov: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Timings {
    pub total_ms: f64,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Results {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub completeness: Option<Vec<CompletenessResult>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hyperbolicity: Option<HyperbolicityReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub access: Option<AccessResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub degree: Option<DegreeResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub obstruction: Option<ObstructionResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub prolongational: Option<Vec<ProlongationalResult>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub figures: Option<Vec<String>>,
}

/// One completeness run, labelled by fiber and approach side.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CompletenessResult {
    pub label: String,
    pub report: DivergenceReport,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AccessResult {
    pub from: Point<f64>,
    pub to: Point<f64>,
    pub chain_length: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certified_lower_bound: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matches_bound: Option<bool>,
    pub chain: Option<AccessChain>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DegreeResult {
    pub pairs: usize,
    pub max_observed: u32,
    pub saturated: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObstructionResult {
    pub flow: String,
    pub obstructed: bool,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ProlongationalResult {
    pub direction: TimeDirection,
    pub set: ProlongationalSet,
}

impl Report {
    pub fn new(command: &str, config: RunConfig, seed: u64) -> Self {
        Report {
            schema: REPORT_SCHEMA_VERSION,
            command: command.into(),
            versions: Versions {
                anosov: env!("CARGO_PKG_VERSION").into(),
            },
            seed,
            threads: std::env::var("ANOSOV_THREADS")
                .ok()
                .and_then(|v| v.parse().ok()),
            config,
            results: Results::default(),
            passed: false,
            timings: Timings::default(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Atomic write (temp file + rename).
    pub fn write(&self, path: &Path) -> Result<()> {
        let tmp = path.with_extension("json.tmp");
        std::fs::write(&tmp, self.to_json())
            .with_context(|| format!("cannot write report to {}", tmp.display()))?;
        std::fs::rename(&tmp, path)
            .with_context(|| format!("cannot move report into place at {}", path.display()))?;
        Ok(())
    }
}
