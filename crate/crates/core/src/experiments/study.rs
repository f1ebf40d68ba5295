use std::collections::{BTreeMap, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::datamodel::manifest::validate_groups;
use crate::datamodel::{SamplingConfig, SubjectGroup};
use crate::error::{Error, Result};

use super::condition::{noisy_prefix, ConditionSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrainingStage {
    Pretrain,
    Sft,
    SftRlhf,
    DsftDdpo,
}

impl TrainingStage {
    /// Label used in rendered tables.
    pub fn label(self) -> &'static str {
        match self {
            TrainingStage::Pretrain => "Pre-training",
            TrainingStage::Sft => "SFT",
            TrainingStage::SftRlhf => "SFT+RLHF",
            TrainingStage::DsftDdpo => "dSFT+dDPO",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub model_id: String,
    pub family: String,
    pub scale_label: String,
    pub training_stage: TrainingStage,
}

/// Parameter count from a label like `7B`, `13B` or `350M`.
pub fn parse_scale(label: &str) -> Result<f64> {
    let bad = || Error::Configuration(format!("scale label {label:?} is not like 7B or 350M"));
    let (num, unit) = label.split_at(label.len().checked_sub(1).ok_or_else(bad)?);
    let factor = match unit {
        "B" | "b" => 1e9,
        "M" | "m" => 1e6,
        _ => return Err(bad()),
    };
    let v: f64 = num.parse().map_err(|_| bad())?;
    if !(v.is_finite() && v > 0.0) {
        return Err(bad());
    }
    Ok(v * factor)
}

fn default_report_condition() -> String {
    "none".into()
}

/// Everything a study run needs besides the data files themselves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub dataset_id: String,
    pub seed: u64,
    pub models: Vec<ModelSpec>,
    pub groups: Vec<SubjectGroup>,
    /// Frozen noisy-instruction prefix; see [`StudyConfig::freeze_noisy_prefix`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub noisy_prefix: Option<String>,
    /// Condition whose scores fill the similarity table.
    #[serde(default = "default_report_condition")]
    pub report_condition: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampling: Option<SamplingConfig>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub paths: BTreeMap<String, String>,
}

impl StudyConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let cfg: StudyConfig = serde_json::from_slice(&bytes)
            .map_err(|e| Error::Format(format!("study config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }

    pub fn validate(&self) -> Result<()> {
        if self.dataset_id.is_empty() {
            return Err(Error::Configuration("dataset_id is empty".into()));
        }
        let mut ids = HashSet::new();
        for m in &self.models {
            if m.model_id.is_empty() || m.family.is_empty() {
                return Err(Error::Configuration("model with empty id or family".into()));
            }
            if !ids.insert(&m.model_id) {
                return Err(Error::Configuration(format!("model {} listed twice", m.model_id)));
            }
            parse_scale(&m.scale_label).map_err(|e| e.context(&m.model_id))?;
        }
        validate_groups(&self.groups)?;
        if let Some(p) = &self.noisy_prefix {
            ConditionSpec::noisy(p.clone())?;
        }
        if let Some(s) = &self.sampling {
            SamplingConfig::new(s.n_voxels, s.seed)?;
        }
        if self.report_condition.is_empty() {
            return Err(Error::Configuration("report_condition is empty".into()));
        }
        Ok(())
    }

    /// Sample and store the noisy prefix from `seed` if none is stored yet.
    /// Returns the stored prefix.
    pub fn freeze_noisy_prefix(&mut self) -> &str {
        let seed = self.seed;
        self.noisy_prefix.get_or_insert_with(|| noisy_prefix(seed))
    }

    /// The three instruction conditions. The noisy one uses the frozen prefix.
    pub fn conditions(&self) -> Result<Vec<ConditionSpec>> {
        let noisy = self.noisy_prefix.as_ref().ok_or_else(|| {
            Error::Configuration("noisy prefix not frozen; run `freeze_noisy_prefix` first".into())
        })?;
        Ok(vec![
            ConditionSpec::none(),
            ConditionSpec::explicit(),
            ConditionSpec::noisy(noisy.clone())?,
        ])
    }

    /// Models ordered by scale, then family (first appearance), then
    /// training stage; ties keep config order.
    pub fn ordered_models(&self) -> Result<Vec<&ModelSpec>> {
        let mut family_rank: BTreeMap<&str, usize> = BTreeMap::new();
        for m in &self.models {
            let next = family_rank.len();
            family_rank.entry(&m.family).or_insert(next);
        }
        let mut keyed = self
            .models
            .iter()
            .map(|m| Ok((parse_scale(&m.scale_label)?, family_rank[m.family.as_str()], m.training_stage, m)))
            .collect::<Result<Vec<_>>>()?;
        keyed.sort_by(|a, b| {
            a.0.total_cmp(&b.0)
                .then(a.1.cmp(&b.1))
                .then(a.2.cmp(&b.2))
        });
        Ok(keyed.into_iter().map(|k| k.3).collect())
    }
}
