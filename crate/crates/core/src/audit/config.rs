//! Audit configuration files.
//!
//! ```json
//! {"maxLevel": 64, "seed": 1,
//!  "instances": [{"ring": {"kind": "Z"},
//!                 "filtration": {"type": "adic", "ideal": ["2"]},
//!                 "sampler": {"kind": "boundedIntegers", "bound": 200}}],
//!  "claims": ["QV_SUPERADD", "VAL_STRONG"]}
//! ```
//!
//! Errors carry a JSON pointer to the offending value.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::claims::ClaimId;
use super::sampler::SamplerSpec;
use crate::filtration::{FiltrationSpec, DEFAULT_DEPTH};
use crate::ring::RingDescriptor;
use crate::valuation::DEFAULT_MAX_LEVEL;

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_SURJECTIVITY_BOUND: u64 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    /// RFC 6901 pointer; empty for the document root.
    pub pointer: String,
    pub message: String,
}

impl ConfigError {
    pub fn new(pointer: impl Into<String>, message: impl fmt::Display) -> Self {
        ConfigError {
            pointer: pointer.into(),
            message: message.to_string(),
        }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pointer.is_empty() {
            write!(f, "config: {}", self.message)
        } else {
            write!(f, "config {}: {}", self.pointer, self.message)
        }
    }
}

impl std::error::Error for ConfigError {}

fn default_max_level() -> usize {
    DEFAULT_MAX_LEVEL
}
fn default_seed() -> u64 {
    DEFAULT_SEED
}
fn default_depth() -> usize {
    DEFAULT_DEPTH
}
fn default_surjectivity_bound() -> u64 {
    DEFAULT_SURJECTIVITY_BOUND
}
fn all_claims() -> Vec<ClaimId> {
    ClaimId::ALL.to_vec()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct AuditConfig {
    #[serde(default = "default_max_level")]
    pub max_level: usize,
    #[serde(default = "default_seed")]
    pub seed: u64,
    #[serde(default = "default_depth")]
    pub validate_depth: usize,
    /// `K` of the surjectivity diagnostic: values `0..=K` must be attained.
    #[serde(default = "default_surjectivity_bound")]
    pub surjectivity_bound: u64,
    #[serde(default)]
    pub instances: Vec<InstanceSpec>,
    #[serde(default = "all_claims")]
    pub claims: Vec<ClaimId>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct InstanceSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub ring: RingDescriptor,
    pub filtration: FiltrationSpec,
    pub sampler: SamplerSpec,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_level: Option<usize>,
}

fn escape_token(t: &str) -> String {
    t.replace('~', "~0").replace('/', "~1")
}

fn pointer_of(path: &serde_path_to_error::Path) -> String {
    use serde_path_to_error::Segment;
    path.iter()
        .filter_map(|seg| match seg {
            Segment::Seq { index } => Some(format!("/{index}")),
            Segment::Map { key } => Some(format!("/{}", escape_token(key))),
            Segment::Enum { .. } | Segment::Unknown => None,
        })
        .collect()
}

impl AuditConfig {
    pub fn from_json(text: &str) -> Result<AuditConfig, ConfigError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let config: AuditConfig = serde_path_to_error::deserialize(de)
            .map_err(|e| ConfigError::new(pointer_of(e.path()), e.inner()))?;
        config.check_ranges()?;
        Ok(config)
    }

    fn check_ranges(&self) -> Result<(), ConfigError> {
        if self.max_level == 0 {
            return Err(ConfigError::new("/maxLevel", "must be at least 1"));
        }
        if self.validate_depth == 0 {
            return Err(ConfigError::new("/validateDepth", "must be at least 1"));
        }
        for (i, inst) in self.instances.iter().enumerate() {
            if inst.max_level == Some(0) {
                return Err(ConfigError::new(
                    format!("/instances/{i}/maxLevel"),
                    "must be at least 1",
                ));
            }
        }
        Ok(())
    }

    /// Canonical serialization, used for hashing and the report echo.
    pub fn canonical_json(&self) -> String {
        serde_json::to_string(self).expect("config serializes")
    }
}
