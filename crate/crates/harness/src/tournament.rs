//! Tournament matrices: strategies x distributions x seeds, fanned out
//! across worker threads. Rounds share nothing, so the result table is
//! assembled in matrix order and is identical at any parallelism level.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::{
    ArenaConfig, DistributionConfig, FeatureFlags, RoundConfig, StrategyConfig,
};
use crate::error::HarnessError;
use crate::round::run_round_scored;

/// Tournament specification file.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixConfig {
    pub seeds: Vec<u64>,
    pub duration_s: f64,
    pub robot_count: u32,
    pub arena: ArenaConfig,
    pub strategies: Vec<StrategyConfig>,
    pub distributions: Vec<DistributionConfig>,
    #[serde(default)]
    pub noise: forage_core::NoiseParams,
    #[serde(default)]
    pub features: FeatureFlags,
}

impl MatrixConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let cfg: MatrixConfig =
            toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        if self.seeds.is_empty() || self.strategies.is_empty() || self.distributions.is_empty() {
            return Err(HarnessError::Config(
                "tournament matrix needs at least one strategy, one distribution, and one seed"
                    .into(),
            ));
        }
        // Validate each cell eagerly so failures surface before any round runs.
        for (label, rc) in self.round_configs()? {
            rc.validate().map_err(|e| {
                HarnessError::Config(format!("cell {label:?}: {e}"))
            })?;
        }
        Ok(())
    }

    /// Human-readable labels for the strategy rows (deduplicated by index
    /// when the same name appears with different parameters).
    pub fn strategy_labels(&self) -> Vec<String> {
        let mut labels = Vec::new();
        for (i, s) in self.strategies.iter().enumerate() {
            let dup = self.strategies.iter().filter(|o| o.name == s.name).count() > 1;
            labels.push(if dup {
                format!("{}#{}", s.name, i)
            } else {
                s.name.clone()
            });
        }
        labels
    }

    /// All rounds in deterministic matrix order:
    /// strategy-major, then distribution, then seed.
    pub fn round_configs(&self) -> Result<Vec<(CellKey, RoundConfig)>, HarnessError> {
        let strategy_labels = self.strategy_labels();
        let mut out = Vec::new();
        for (si, strategy) in self.strategies.iter().enumerate() {
            for dist in &self.distributions {
                let dist_label = dist.to_spec()?.label();
                for &seed in &self.seeds {
                    let key = CellKey {
                        strategy: strategy_labels[si].clone(),
                        distribution: dist_label.clone(),
                        seed,
                    };
                    let rc = RoundConfig {
                        seed,
                        duration_s: self.duration_s,
                        robot_count: self.robot_count,
                        trace_interval_ticks: u64::MAX >> 1, // tournaments skip traces anyway
                        arena: self.arena.clone(),
                        strategy: strategy.clone(),
                        distribution: dist.clone(),
                        noise: self.noise.clone(),
                        features: self.features.clone(),
                    };
                    out.push((key, rc));
                }
            }
        }
        Ok(out)
    }

    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let canonical = toml::to_string(self).expect("matrix serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CellKey {
    pub strategy: String,
    pub distribution: String,
    pub seed: u64,
}

/// Per-cell aggregate over seeds.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct CellStats {
    pub strategy: String,
    pub distribution: String,
    pub median: f64,
    pub min: u32,
    pub max: u32,
    pub scores: Vec<u32>,
}

/// One round's record in the result file.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct RoundRecord {
    pub strategy: String,
    pub distribution: String,
    pub seed: u64,
    pub score: u32,
    pub cubes_banked: u32,
    pub total_distance_m: f64,
    pub config_digest: String,
}

/// Complete tournament output. Serialization is deterministic: no clocks,
/// no maps, vectors in matrix order.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct TournamentResult {
    pub matrix_digest: String,
    pub cells: Vec<CellStats>,
    pub rounds: Vec<RoundRecord>,
}

/// Median of a non-empty sorted-or-not sample; even counts average the two
/// middle values.
pub fn median(scores: &[u32]) -> f64 {
    assert!(!scores.is_empty());
    let mut sorted: Vec<u32> = scores.to_vec();
    sorted.sort_unstable();
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2] as f64
    } else {
        (sorted[n / 2 - 1] as f64 + sorted[n / 2] as f64) / 2.0
    }
}

/// Run every round of the matrix, optionally capping worker threads, and
/// aggregate per-cell statistics.
pub fn run_tournament(
    matrix: &MatrixConfig,
    jobs: Option<usize>,
) -> Result<TournamentResult, HarnessError> {
    matrix.validate()?;
    let rounds = matrix.round_configs()?;

    let execute = || -> Result<Vec<crate::round::RoundResult>, HarnessError> {
        rounds
            .par_iter()
            .map(|(_, rc)| run_round_scored(rc))
            .collect()
    };
    let results = match jobs {
        Some(j) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(j.max(1))
                .build()
                .map_err(|e| HarnessError::Config(format!("thread pool: {e}")))?;
            pool.install(execute)?
        }
        None => execute()?,
    };

    let mut round_records = Vec::with_capacity(results.len());
    for ((key, _), result) in rounds.iter().zip(&results) {
        round_records.push(RoundRecord {
            strategy: key.strategy.clone(),
            distribution: key.distribution.clone(),
            seed: key.seed,
            score: result.score,
            cubes_banked: result.robots.iter().map(|r| r.cubes_banked).sum(),
            total_distance_m: result.robots.iter().map(|r| r.distance_traveled).sum(),
            config_digest: result.config_digest.clone(),
        });
    }

    // Aggregate in matrix order: one cell per (strategy, distribution).
    let mut cells: Vec<CellStats> = Vec::new();
    for record in &round_records {
        let found = cells
            .iter_mut()
            .find(|c| c.strategy == record.strategy && c.distribution == record.distribution);
        match found {
            Some(cell) => cell.scores.push(record.score),
            None => cells.push(CellStats {
                strategy: record.strategy.clone(),
                distribution: record.distribution.clone(),
                median: 0.0,
                min: 0,
                max: 0,
                scores: vec![record.score],
            }),
        }
    }
    for cell in &mut cells {
        cell.median = median(&cell.scores);
        cell.min = *cell.scores.iter().min().expect("non-empty");
        cell.max = *cell.scores.iter().max().expect("non-empty");
    }

    Ok(TournamentResult {
        matrix_digest: matrix.digest(),
        cells,
        rounds: round_records,
    })
}
