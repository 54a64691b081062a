use serde::{Deserialize, Serialize};

use crate::context::SimilarityMode;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("alpha must be a finite value >= 0, got {0}")]
    Alpha(f64),
    #[error("scan-budget must be at least 1")]
    ScanBudget,
    #[error("min-evidence must be at least 2, got {0}")]
    MinEvidence(usize),
    #[error("jobs must be at least 1")]
    Jobs,
}

/// Knobs for one enrichment run. Serialized keys match the CLI flag names.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", default, deny_unknown_fields)]
pub struct EnrichmentConfig {
    /// Context-similarity threshold, in the units of `similarity_mode`.
    pub alpha: f64,
    /// Triples a single pair search may examine.
    pub scan_budget: usize,
    /// Pairs whose closest mentions are further apart than this are skipped.
    /// `None` keeps every pair.
    pub distance_cap: Option<usize>,
    pub similarity_mode: SimilarityMode,
    /// Context window, in tokens, on each side of a mention.
    pub window: usize,
    /// Sibling schemas needed before a parent-level hypothesis is raised.
    pub min_evidence: usize,
    /// Taxonomy levels climbed by generalization.
    pub passes: usize,
    pub jobs: usize,
}

impl Default for EnrichmentConfig {
    fn default() -> Self {
        EnrichmentConfig {
            alpha: 0.15,
            scan_budget: 100_000,
            distance_cap: None,
            similarity_mode: SimilarityMode::Mean,
            window: 10,
            min_evidence: 2,
            passes: 1,
            jobs: 1,
        }
    }
}

impl EnrichmentConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.alpha.is_finite() && self.alpha >= 0.0) {
            return Err(ConfigError::Alpha(self.alpha));
        }
        if self.scan_budget == 0 {
            return Err(ConfigError::ScanBudget);
        }
        if self.min_evidence < 2 {
            return Err(ConfigError::MinEvidence(self.min_evidence));
        }
        if self.jobs == 0 {
            return Err(ConfigError::Jobs);
        }
        Ok(())
    }
}
