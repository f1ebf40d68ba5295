use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One similarity score with its provenance. CSV columns, in order:
/// `model_id,subject_id,condition_id,n_stimuli,seed,score`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimilarityRecord {
    pub model_id: String,
    pub subject_id: String,
    pub condition_id: String,
    pub n_stimuli: usize,
    pub seed: u64,
    pub score: f64,
}

impl SimilarityRecord {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("model_id", &self.model_id),
            ("subject_id", &self.subject_id),
            ("condition_id", &self.condition_id),
        ] {
            if v.is_empty() {
                return Err(Error::Format(format!("similarity record with empty {name}")));
            }
        }
        if !self.score.is_finite() || !(-1.0..=1.0).contains(&self.score) {
            return Err(Error::Format(format!(
                "record {}/{}/{}: score {} outside [-1, 1]",
                self.model_id, self.subject_id, self.condition_id, self.score
            )));
        }
        Ok(())
    }

    /// Canonical ordering key.
    pub fn key(&self) -> (&str, &str, &str) {
        (&self.model_id, &self.subject_id, &self.condition_id)
    }
}

pub fn write_records(writer: impl Write, records: &[SimilarityRecord]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for r in records {
        w.serialize(r)?;
    }
    if records.is_empty() {
        w.write_record(["model_id", "subject_id", "condition_id", "n_stimuli", "seed", "score"])?;
    }
    w.flush().map_err(|e| Error::io("<records>", e))?;
    Ok(())
}

pub fn read_records(reader: impl Read) -> Result<Vec<SimilarityRecord>> {
    let mut rdr = csv::Reader::from_reader(reader);
    let expected = ["model_id", "subject_id", "condition_id", "n_stimuli", "seed", "score"];
    let headers = rdr.headers()?;
    if headers.iter().ne(expected) {
        return Err(Error::Format(format!(
            "similarity csv header must be {}, got {}",
            expected.join(","),
            headers.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for rec in rdr.deserialize() {
        let rec: SimilarityRecord = rec?;
        rec.validate()?;
        out.push(rec);
    }
    Ok(out)
}
