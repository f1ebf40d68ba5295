use std::collections::BTreeMap;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rdm::SimilarityRecord;

use super::condition::ConditionId;

/// Score change between two conditions for one (model, group).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionDelta {
    pub model_id: String,
    pub group_id: String,
    pub treatment: String,
    pub baseline: String,
    pub delta: f64,
}

/// `score(treatment) - score(baseline)` for every (model, subject-or-group)
/// that has a record under either condition. Sorted by (model, group).
pub fn condition_delta(records: &[SimilarityRecord], treatment: &str, baseline: &str) -> Result<Vec<ConditionDelta>> {
    if treatment == baseline {
        return Err(Error::Configuration(format!(
            "treatment and baseline are both {treatment:?}"
        )));
    }
    // (treatment, baseline) score per (model, group)
    type Slot = (Option<f64>, Option<f64>);
    let mut pairs: BTreeMap<(&str, &str), Slot> = BTreeMap::new();
    for r in records {
        let slot = pairs.entry((&r.model_id, &r.subject_id)).or_default();
        let target = if r.condition_id == treatment {
            &mut slot.0
        } else if r.condition_id == baseline {
            &mut slot.1
        } else {
            continue;
        };
        if target.replace(r.score).is_some() {
            return Err(Error::Completeness(format!(
                "duplicate {} record for {}/{}",
                r.condition_id, r.model_id, r.subject_id
            )));
        }
    }

    let mut out = Vec::with_capacity(pairs.len());
    let mut missing = Vec::new();
    for ((model, group), scores) in pairs {
        match scores {
            (Some(t), Some(b)) => out.push(ConditionDelta {
                model_id: model.to_owned(),
                group_id: group.to_owned(),
                treatment: treatment.to_owned(),
                baseline: baseline.to_owned(),
                delta: t - b,
            }),
            (None, Some(_)) => missing.push(format!("{model}/{group} lacks {treatment}")),
            (Some(_), None) => missing.push(format!("{model}/{group} lacks {baseline}")),
            (None, None) => {}
        }
    }
    if !missing.is_empty() {
        return Err(Error::Completeness(missing.join("; ")));
    }
    Ok(out)
}

/// Explicit-instruction minus no-instruction score.
pub fn instruction_delta(records: &[SimilarityRecord]) -> Result<Vec<ConditionDelta>> {
    condition_delta(records, ConditionId::Explicit.as_str(), ConditionId::None.as_str())
}

/// CSV columns: `model_id,group_id,treatment,baseline,delta`.
pub fn write_deltas(writer: impl Write, deltas: &[ConditionDelta]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    if deltas.is_empty() {
        w.write_record(["model_id", "group_id", "treatment", "baseline", "delta"])?;
    }
    for d in deltas {
        w.serialize(d)?;
    }
    w.flush().map_err(|e| Error::io("<deltas>", e))?;
    Ok(())
}

pub fn read_deltas(reader: impl Read) -> Result<Vec<ConditionDelta>> {
    let mut rdr = csv::Reader::from_reader(reader);
    if rdr.headers()?.iter().ne(["model_id", "group_id", "treatment", "baseline", "delta"]) {
        return Err(Error::Format(
            "delta csv header must be model_id,group_id,treatment,baseline,delta".into(),
        ));
    }
    let mut out = Vec::new();
    for d in rdr.deserialize() {
        let d: ConditionDelta = d?;
        if !d.delta.is_finite() {
            return Err(Error::Format(format!("{}/{}: non-finite delta", d.model_id, d.group_id)));
        }
        out.push(d);
    }
    Ok(out)
}
