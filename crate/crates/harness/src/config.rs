//! Round and tournament configuration files: human-editable TOML with
//! strict schemas. Unknown keys are rejected everywhere, and every
//! validation failure is reported before any simulation starts.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use forage_core::{
    ArenaPreset, ClusterSpec, DistributionKind, DistributionSpec, ExploreExploitParams,
    LawnmowerParams, NoiseParams, RandomWalkParams, SpokeParams, StrategySpec,
};

use crate::error::HarnessError;

fn default_trace_interval() -> u64 {
    10
}

/// Complete specification of one seeded round.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RoundConfig {
    /// Master seed; every stream in the round derives from it.
    pub seed: u64,
    /// Simulated round length, seconds.
    pub duration_s: f64,
    pub robot_count: u32,
    /// State rows are written every this many ticks.
    #[serde(default = "default_trace_interval")]
    pub trace_interval_ticks: u64,
    pub arena: ArenaConfig,
    pub strategy: StrategyConfig,
    pub distribution: DistributionConfig,
    #[serde(default)]
    pub noise: NoiseParams,
    #[serde(default)]
    pub features: FeatureFlags,
}

impl RoundConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        let cfg: RoundConfig =
            toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Check everything that can be checked before simulating.
    pub fn validate(&self) -> Result<(), HarnessError> {
        if !self.duration_s.is_finite() || self.duration_s < 0.0 {
            return Err(HarnessError::Config(format!(
                "duration_s must be finite and >= 0, got {}",
                self.duration_s
            )));
        }
        if self.robot_count == 0 {
            return Err(HarnessError::Config("robot_count must be >= 1".into()));
        }
        if self.trace_interval_ticks == 0 {
            return Err(HarnessError::Config("trace_interval_ticks must be >= 1".into()));
        }
        for (name, v) in [
            ("sigma_encoder", self.noise.sigma_encoder),
            ("sigma_imu", self.noise.sigma_imu),
            ("sigma_gps", self.noise.sigma_gps),
            ("sigma_detection_range", self.noise.sigma_detection_range),
            ("sigma_detection_bearing", self.noise.sigma_detection_bearing),
        ] {
            if !v.is_finite() || v < 0.0 {
                return Err(HarnessError::Config(format!("noise.{name} must be >= 0, got {v}")));
            }
        }
        if !(self.noise.gps_period_s > 0.0) {
            return Err(HarnessError::Config("noise.gps_period_s must be > 0".into()));
        }
        self.arena.to_preset()?;
        self.strategy.to_spec()?;
        self.distribution.to_spec()?;
        Ok(())
    }

    /// SHA-256 of the canonical serialized config; recorded in every result
    /// and trace so outputs can be audited against their inputs.
    pub fn digest(&self) -> String {
        use sha2::{Digest, Sha256};
        let canonical = toml::to_string(self).expect("config serializes");
        let mut hasher = Sha256::new();
        hasher.update(canonical.as_bytes());
        let out = hasher.finalize();
        out.iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Arena selection: a named competition preset or a custom side length
/// (exactly one of the two).
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArenaConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub preset: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side_length: Option<f64>,
}

impl ArenaConfig {
    pub fn to_preset(&self) -> Result<ArenaPreset, HarnessError> {
        match (&self.preset, self.side_length) {
            (Some(name), None) => match name.as_str() {
                "small15" => Ok(ArenaPreset::Small15),
                "large22" => Ok(ArenaPreset::Large22),
                other => Err(HarnessError::Config(format!(
                    "unknown arena preset {other:?} (expected \"small15\" or \"large22\")"
                ))),
            },
            (None, Some(side)) => {
                if !(side.is_finite() && side > 2.0) {
                    return Err(HarnessError::Config(format!(
                        "arena.side_length must be > 2, got {side}"
                    )));
                }
                Ok(ArenaPreset::Custom { side_length: side })
            }
            _ => Err(HarnessError::Config(
                "arena needs exactly one of `preset` or `side_length`".into(),
            )),
        }
    }
}

/// Strategy selection by name plus a parameter map.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrategyConfig {
    pub name: String,
    #[serde(default, skip_serializing_if = "toml::Table::is_empty")]
    pub params: toml::Table,
}

impl StrategyConfig {
    pub fn to_spec(&self) -> Result<StrategySpec, HarnessError> {
        strategy_spec(&self.name, &self.params)
    }
}

fn parse_params<T: DeserializeOwned>(name: &str, table: &toml::Table) -> Result<T, HarnessError> {
    toml::Value::Table(table.clone())
        .try_into()
        .map_err(|e| HarnessError::Config(format!("bad params for strategy {name:?}: {e}")))
}

fn strategy_spec(name: &str, params: &toml::Table) -> Result<StrategySpec, HarnessError> {
    match name {
        "random_walk" => Ok(StrategySpec::RandomWalk(parse_params::<RandomWalkParams>(
            name, params,
        )?)),
        "spoke" => Ok(StrategySpec::Spoke(parse_params::<SpokeParams>(name, params)?)),
        "lawnmower" => Ok(StrategySpec::Lawnmower(parse_params::<LawnmowerParams>(
            name, params,
        )?)),
        "explore_exploit" => {
            let mut rest = params.clone();
            let base_value = rest.remove("base");
            let ee: ExploreExploitParams = parse_params(name, &rest)?;
            let base = match base_value {
                None => StrategySpec::Lawnmower(LawnmowerParams::default()),
                Some(toml::Value::Table(mut bt)) => {
                    let base_name = bt
                        .remove("name")
                        .and_then(|v| v.as_str().map(str::to_owned))
                        .ok_or_else(|| {
                            HarnessError::Config("explore_exploit base needs a `name`".into())
                        })?;
                    if base_name == "explore_exploit" {
                        return Err(HarnessError::Config(
                            "explore_exploit cannot wrap itself".into(),
                        ));
                    }
                    strategy_spec(&base_name, &bt)?
                }
                Some(_) => {
                    return Err(HarnessError::Config(
                        "explore_exploit `base` must be a table".into(),
                    ))
                }
            };
            Ok(StrategySpec::ExploreExploit {
                params: ee,
                base: Box::new(base),
            })
        }
        other => Err(HarnessError::Config(format!(
            "unknown strategy {other:?} (expected random_walk, spoke, lawnmower, or explore_exploit)"
        ))),
    }
}

/// Resource distribution over the arena.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistributionConfig {
    /// "uniform" | "clustered" | "large_cluster"
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clusters: Option<Vec<ClusterEntry>>,
    #[serde(default = "default_exclusion_radius")]
    pub exclusion_radius: f64,
}

fn default_exclusion_radius() -> f64 {
    1.5
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClusterEntry {
    pub count: usize,
    pub cubes_per_row: usize,
}

impl DistributionConfig {
    pub fn to_spec(&self) -> Result<DistributionSpec, HarnessError> {
        if !(self.exclusion_radius.is_finite() && self.exclusion_radius >= 0.0) {
            return Err(HarnessError::Config(
                "distribution.exclusion_radius must be >= 0".into(),
            ));
        }
        let kind = match self.kind.as_str() {
            "uniform" => {
                let count = self.count.ok_or_else(|| {
                    HarnessError::Config("uniform distribution needs `count`".into())
                })?;
                if self.clusters.is_some() {
                    return Err(HarnessError::Config(
                        "uniform distribution does not take `clusters`".into(),
                    ));
                }
                DistributionKind::Uniform { count }
            }
            "large_cluster" => {
                let count = self.count.ok_or_else(|| {
                    HarnessError::Config("large_cluster distribution needs `count`".into())
                })?;
                if self.clusters.is_some() {
                    return Err(HarnessError::Config(
                        "large_cluster distribution does not take `clusters`".into(),
                    ));
                }
                DistributionKind::LargeCluster { count }
            }
            "clustered" => {
                let entries = self.clusters.as_ref().ok_or_else(|| {
                    HarnessError::Config("clustered distribution needs `clusters`".into())
                })?;
                if self.count.is_some() {
                    return Err(HarnessError::Config(
                        "clustered distribution does not take `count`".into(),
                    ));
                }
                DistributionKind::Clustered {
                    clusters: entries
                        .iter()
                        .map(|c| ClusterSpec {
                            count: c.count,
                            cubes_per_row: c.cubes_per_row,
                        })
                        .collect(),
                }
            }
            other => {
                return Err(HarnessError::Config(format!(
                    "unknown distribution kind {other:?}"
                )))
            }
        };
        if matches!(kind, DistributionKind::Uniform { count: 0 } | DistributionKind::LargeCluster { count: 0 }) {
            return Err(HarnessError::Config("cube count must be >= 1".into()));
        }
        Ok(DistributionSpec {
            kind,
            exclusion_radius: self.exclusion_radius,
        })
    }
}

/// Optional mechanics switches.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FeatureFlags {
    /// Robots displace cubes they drive over (on in competition).
    pub pushing: bool,
    /// Delay before a blackboard post becomes visible, ticks.
    pub blackboard_latency_ticks: u64,
}

impl Default for FeatureFlags {
    fn default() -> Self {
        Self {
            pushing: true,
            blackboard_latency_ticks: 0,
        }
    }
}
