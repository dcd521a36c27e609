use std::path::{Path, PathBuf};

use lifshitz_core::surface::Dynamics;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{LabError, LabResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    TauPlus,
    Coupling,
    Dimer,
    Spectrum,
    Heat,
    Coldyn,
    #[serde(rename = "modified-2d")]
    Modified2d,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::TauPlus => "tau-plus",
            ExperimentKind::Coupling => "coupling",
            ExperimentKind::Dimer => "dimer",
            ExperimentKind::Spectrum => "spectrum",
            ExperimentKind::Heat => "heat",
            ExperimentKind::Coldyn => "coldyn",
            ExperimentKind::Modified2d => "modified-2d",
        }
    }

    pub fn parse(s: &str) -> LabResult<Self> {
        serde_json::from_value(serde_json::Value::String(s.to_string())).map_err(|_| LabError::Config(format!("unknown experiment kind `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// Experiment-specific knobs; unused ones are ignored.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Params {
    /// Flip budget for `tau-plus`, time horizon for `coupling`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<f64>,
    /// Box height for `coupling`; defaults to the side.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub height: Option<i32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dynamics: Option<Dynamics>,
    /// Dimer weights `(p_a, p_b, p_c)`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<[f64; 3]>,
    /// Absolute time for `heat` and `coldyn`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    /// Time as a multiple of `L²` when `time` is absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_factor: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub core_fraction: Option<f64>,
}

fn default_dim() -> usize {
    2
}

fn default_replicas() -> u64 {
    1
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default = "default_dim")]
    pub dim: usize,
    pub sizes: Vec<usize>,
    #[serde(default = "default_replicas")]
    pub replicas: u64,
    #[serde(default)]
    pub seed: u64,
    /// Inverse temperature; absent means `β = ∞`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub params: Params,
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> LabResult<Self> {
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| LabError::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> LabResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|source| LabError::Io { path: path.to_path_buf(), source })?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> LabResult<()> {
        if self.sizes.is_empty() {
            return Err(LabError::Config("sizes must not be empty".into()));
        }
        if self.sizes[0] == 0 || self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(LabError::Config("sizes must be positive and strictly increasing".into()));
        }
        if self.replicas == 0 {
            return Err(LabError::Config("replicas must be at least 1".into()));
        }
        if self.dim != 2 && self.dim != 3 {
            return Err(LabError::Config(format!("dim must be 2 or 3, got {}", self.dim)));
        }
        if let Some(b) = self.beta {
            if !(b > 0.0) {
                return Err(LabError::Config(format!("beta must be positive, got {b}")));
            }
        }
        Ok(())
    }

    /// SHA-256 of the canonical JSON form, first 16 hex digits. The output
    /// directory and format do not enter the hash.
    pub fn hash(&self) -> String {
        let mut canon = self.clone();
        canon.out = None;
        canon.format = Format::Csv;
        let bytes = serde_json::to_vec(&canon).expect("config serialises");
        Sha256::digest(&bytes).iter().take(8).map(|b| format!("{b:02x}")).collect()
    }
}
