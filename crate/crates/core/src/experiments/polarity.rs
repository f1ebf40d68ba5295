use std::cmp::Ordering;
use std::collections::HashSet;
use std::io::Read;

use serde::Deserialize;

use crate::datamodel::{StimulusKind, StimulusManifest};
use crate::error::{Error, Result};
use crate::rdm::{row_profile_similarity, rsa_score, Rdm};
use crate::registry::{Named, Registry};
use crate::stats::mean;

pub const DEFAULT_K: usize = 10;

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct PolarityEntry {
    pub concept_id: String,
    pub score: f64,
}

/// Emotional polarity score per concept, read from `concept_id,score` CSV.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarityTable {
    pub entries: Vec<PolarityEntry>,
    pub k: usize,
}

impl PolarityTable {
    pub fn new(entries: Vec<PolarityEntry>, k: usize) -> Result<Self> {
        let mut seen = HashSet::new();
        for e in &entries {
            if !e.score.is_finite() || !(-1.0..=1.0).contains(&e.score) {
                return Err(Error::Format(format!(
                    "polarity of {} is {}, expected a finite value in [-1, 1]",
                    e.concept_id, e.score
                )));
            }
            if !seen.insert(e.concept_id.as_str()) {
                return Err(Error::Format(format!("concept {} scored twice", e.concept_id)));
            }
        }
        if k == 0 {
            return Err(Error::Configuration("k must be positive".into()));
        }
        Ok(PolarityTable { entries, k })
    }

    pub fn read_csv(reader: impl Read, k: usize) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let headers = rdr.headers()?;
        if headers.iter().ne(["concept_id", "score"]) {
            return Err(Error::Format("polarity csv header must be concept_id,score".into()));
        }
        let entries = rdr.deserialize().collect::<std::result::Result<Vec<PolarityEntry>, _>>()?;
        PolarityTable::new(entries, k)
    }

    /// Every concept must be a concept stimulus of `manifest`.
    pub fn validate_against(&self, manifest: &StimulusManifest) -> Result<()> {
        for e in &self.entries {
            match manifest.position(&e.concept_id) {
                Some(i) if manifest.stimuli()[i].kind == StimulusKind::Concept => {}
                Some(_) => {
                    return Err(Error::Contract(format!(
                        "{} is not a concept stimulus in {}",
                        e.concept_id,
                        manifest.dataset_id()
                    )))
                }
                None => {
                    return Err(Error::Contract(format!(
                        "concept {} not in manifest {}",
                        e.concept_id,
                        manifest.dataset_id()
                    )))
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolarityExtremes {
    pub positive: Vec<String>,
    pub negative: Vec<String>,
}

/// Top-`k` concepts by descending score and by ascending score. Ties go to
/// the lexicographically smaller concept id.
pub fn select_polarity_extremes(table: &PolarityTable) -> Result<PolarityExtremes> {
    let k = table.k;
    if table.entries.len() < 2 * k {
        return Err(Error::Configuration(format!(
            "need at least {} scored concepts for k = {k}, got {}",
            2 * k,
            table.entries.len()
        )));
    }
    let pick = |cmp: &dyn Fn(&PolarityEntry, &PolarityEntry) -> Ordering| -> Vec<String> {
        let mut sorted: Vec<&PolarityEntry> = table.entries.iter().collect();
        sorted.sort_by(|a, b| cmp(a, b).then_with(|| a.concept_id.cmp(&b.concept_id)));
        sorted.iter().take(k).map(|e| e.concept_id.clone()).collect()
    };
    let positive = pick(&|a, b| b.score.total_cmp(&a.score));
    let negative = pick(&|a, b| a.score.total_cmp(&b.score));

    if let Some(both) = positive.iter().find(|c| negative.contains(c)) {
        return Err(Error::Configuration(format!(
            "concept {both} is among both the top-{k} positive and negative concepts; lower k"
        )));
    }
    Ok(PolarityExtremes { positive, negative })
}

/// A way to score brain/model agreement over a chosen subset of concepts.
pub trait PolarityScorer: Named + Send + Sync {
    /// `indices` are RDM positions, `ids` the matching concept ids for errors.
    fn score(&self, rdm_h: &Rdm, rdm_m: &Rdm, indices: &[usize], ids: &[String]) -> Result<f64>;
}

/// Mean over the set of each concept's row-profile similarity against all
/// other stimuli.
pub struct RowProfile;

impl Named for RowProfile {
    fn name(&self) -> &'static str {
        "row_profile"
    }

    fn description(&self) -> &'static str {
        "mean of per-concept row-profile correlations"
    }
}

impl PolarityScorer for RowProfile {
    fn score(&self, rdm_h: &Rdm, rdm_m: &Rdm, indices: &[usize], ids: &[String]) -> Result<f64> {
        let scores = indices
            .iter()
            .zip(ids)
            .map(|(&i, id)| {
                row_profile_similarity(rdm_h, rdm_m, i).map_err(|e| e.context(format!("concept {id}")))
            })
            .collect::<Result<Vec<f64>>>()?;
        mean(&scores)
    }
}

/// RSA over the RDMs restricted to the set's rows and columns.
pub struct SubRdm;

impl Named for SubRdm {
    fn name(&self) -> &'static str {
        "sub_rdm"
    }

    fn description(&self) -> &'static str {
        "RSA score of the RDMs restricted to the selected concepts"
    }
}

impl PolarityScorer for SubRdm {
    fn score(&self, rdm_h: &Rdm, rdm_m: &Rdm, indices: &[usize], ids: &[String]) -> Result<f64> {
        let h = rdm_h.restrict(indices)?;
        let m = rdm_m.restrict(indices)?;
        rsa_score(&h, &m).map_err(|e| e.context(format!("concepts [{}]", ids.join(", "))))
    }
}

/// Built-in polarity scoring modes; `row_profile` is the default.
pub fn polarity_modes() -> Registry<dyn PolarityScorer> {
    let mut reg: Registry<dyn PolarityScorer> = Registry::new("polarity mode", Box::new(RowProfile));
    reg.register(Box::new(SubRdm));
    reg
}

/// Score `concepts` (ids from `manifest`) with the given mode.
pub fn polarity_similarity(
    rdm_h: &Rdm,
    rdm_m: &Rdm,
    manifest: &StimulusManifest,
    concepts: &[String],
    mode: &dyn PolarityScorer,
) -> Result<f64> {
    for r in [rdm_h, rdm_m] {
        if r.dataset_id() != manifest.dataset_id() || r.n() != manifest.len() {
            return Err(Error::Contract(format!(
                "RDM ({}, n={}) does not match manifest ({}, n={})",
                r.dataset_id(),
                r.n(),
                manifest.dataset_id(),
                manifest.len()
            )));
        }
    }
    if concepts.is_empty() {
        return Err(Error::Contract("empty concept set".into()));
    }
    let indices = concepts
        .iter()
        .map(|c| {
            manifest
                .position(c)
                .ok_or_else(|| Error::Contract(format!("concept {c} not in manifest {}", manifest.dataset_id())))
        })
        .collect::<Result<Vec<usize>>>()?;
    mode.score(rdm_h, rdm_m, &indices, concepts)
}
