use std::collections::{BTreeSet, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StimulusKind {
    Concept,
    Sentence,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stimulus {
    pub stimulus_id: String,
    pub text: String,
    pub kind: StimulusKind,
}

/// Ordered stimulus set shared by every matrix of one dataset. The order of
/// `stimuli` is the canonical row order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawManifest", into = "RawManifest")]
pub struct StimulusManifest {
    dataset_id: String,
    stimuli: Vec<Stimulus>,
    index: HashMap<String, usize>,
}

#[derive(Serialize, Deserialize)]
struct RawManifest {
    dataset_id: String,
    stimuli: Vec<Stimulus>,
}

impl TryFrom<RawManifest> for StimulusManifest {
    type Error = Error;

    fn try_from(raw: RawManifest) -> Result<Self> {
        StimulusManifest::new(raw.dataset_id, raw.stimuli)
    }
}

impl From<StimulusManifest> for RawManifest {
    fn from(m: StimulusManifest) -> Self {
        RawManifest {
            dataset_id: m.dataset_id,
            stimuli: m.stimuli,
        }
    }
}

impl StimulusManifest {
    pub fn new(dataset_id: impl Into<String>, stimuli: Vec<Stimulus>) -> Result<Self> {
        let dataset_id = dataset_id.into();
        if dataset_id.is_empty() {
            return Err(Error::Format("manifest dataset_id is empty".into()));
        }
        let mut index = HashMap::with_capacity(stimuli.len());
        for (i, s) in stimuli.iter().enumerate() {
            if s.stimulus_id.is_empty() {
                return Err(Error::Format(format!("stimulus #{i} has an empty id")));
            }
            if index.insert(s.stimulus_id.clone(), i).is_some() {
                return Err(Error::Format(format!(
                    "duplicate stimulus_id {:?} in manifest {dataset_id}",
                    s.stimulus_id
                )));
            }
        }
        Ok(StimulusManifest {
            dataset_id,
            stimuli,
            index,
        })
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        serde_json::from_slice(&bytes)
            .map_err(|e| Error::Format(format!("manifest {}: {e}", path.display())))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }

    pub fn dataset_id(&self) -> &str {
        &self.dataset_id
    }

    pub fn stimuli(&self) -> &[Stimulus] {
        &self.stimuli
    }

    pub fn len(&self) -> usize {
        self.stimuli.len()
    }

    pub fn is_empty(&self) -> bool {
        self.stimuli.is_empty()
    }

    pub fn position(&self, stimulus_id: &str) -> Option<usize> {
        self.index.get(stimulus_id).copied()
    }

    pub fn id_at(&self, index: usize) -> &str {
        &self.stimuli[index].stimulus_id
    }

    /// Number of stimuli of the given kind.
    pub fn count(&self, kind: StimulusKind) -> usize {
        self.stimuli.iter().filter(|s| s.kind == kind).count()
    }
}

/// A named set of subjects whose scores are averaged together.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubjectGroup {
    pub group_id: String,
    pub subject_ids: Vec<String>,
}

impl SubjectGroup {
    pub fn new(group_id: impl Into<String>, subject_ids: Vec<String>) -> Result<Self> {
        let g = SubjectGroup {
            group_id: group_id.into(),
            subject_ids,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.group_id.is_empty() {
            return Err(Error::Format("group_id is empty".into()));
        }
        if self.subject_ids.is_empty() {
            return Err(Error::Format(format!("group {} has no subjects", self.group_id)));
        }
        let mut seen = BTreeSet::new();
        for s in &self.subject_ids {
            if !seen.insert(s.as_str()) {
                return Err(Error::Format(format!(
                    "subject {s} listed twice in group {}",
                    self.group_id
                )));
            }
        }
        Ok(())
    }

    pub fn contains(&self, subject_id: &str) -> bool {
        self.subject_ids.iter().any(|s| s == subject_id)
    }
}

/// Check that no subject belongs to two groups and group ids are unique.
pub fn validate_groups(groups: &[SubjectGroup]) -> Result<()> {
    let mut ids = BTreeSet::new();
    let mut owner: HashMap<&str, &str> = HashMap::new();
    for g in groups {
        g.validate()?;
        if !ids.insert(g.group_id.as_str()) {
            return Err(Error::Format(format!("duplicate group_id {}", g.group_id)));
        }
        for s in &g.subject_ids {
            if let Some(prev) = owner.insert(s, &g.group_id) {
                return Err(Error::Format(format!(
                    "subject {s} belongs to both {prev} and {}",
                    g.group_id
                )));
            }
        }
    }
    Ok(())
}

/// Groups file: `{"groups": [{"group_id": ..., "subject_ids": [...]}, ...]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroupsFile {
    pub groups: Vec<SubjectGroup>,
}

impl GroupsFile {
    pub fn load(path: impl AsRef<Path>) -> Result<Vec<SubjectGroup>> {
        let path = path.as_ref();
        let bytes = std::fs::read(path).map_err(|e| Error::io(path, e))?;
        let file: GroupsFile = serde_json::from_slice(&bytes)
            .map_err(|e| Error::Format(format!("groups {}: {e}", path.display())))?;
        validate_groups(&file.groups)?;
        Ok(file.groups)
    }
}
