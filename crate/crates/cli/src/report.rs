//! Run results with the provenance needed to reproduce them.

use std::path::Path;

use anyhow::{Context, Result};
use delaynet_core::estimate::{EmbeddingEstimate, RelevanceProfile};
use delaynet_core::forecast::ForecastReport;
use delaynet_core::net::TrainReport;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

/// Everything needed to re-run an experiment and get identical artifacts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Provenance {
    /// Effective configuration after defaults and overrides.
    pub config: RunConfig,
    pub fold_seeds: Vec<u64>,
    pub version: String,
    /// Wall time of the run; informational, excluded from reproducibility
    /// comparisons.
    pub wall_ms: u128,
}

/// Output of one estimation run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub estimate: EmbeddingEstimate,
    pub profile: RelevanceProfile,
    pub train_reports: Vec<TrainReport>,
    pub forecast: Option<ForecastReport>,
    pub provenance: Provenance,
}

impl RunResult {
    /// Equality of everything the run computed, ignoring wall time.
    pub fn same_artifacts(&self, other: &RunResult) -> bool {
        self.estimate == other.estimate
            && self.profile == other.profile
            && self.train_reports == other.train_reports
            && self.forecast == other.forecast
            && self.provenance.config == other.provenance.config
            && self.provenance.fold_seeds == other.provenance.fold_seeds
    }
}

/// Output of one forecast run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ForecastRunResult {
    pub report: ForecastReport,
    /// Present when the run trained its own folds rather than reloading a
    /// snapshot.
    pub estimate: Option<EmbeddingEstimate>,
    pub provenance: Provenance,
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let json = serde_json::to_string_pretty(value).context("serializing report")?;
    std::fs::write(path, json).with_context(|| format!("writing {}", path.display()))
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}
