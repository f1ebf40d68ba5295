use std::collections::BTreeMap;

use crate::datamodel::SubjectGroup;
use crate::error::{Error, Result};
use crate::stats::mean;

use super::SimilarityRecord;

/// Average the member scores of `group` for one (model, condition).
///
/// Records for subjects outside the group are ignored. Every member must
/// have exactly one record; scores are averaged in the group's subject order.
pub fn group_score(records: &[SimilarityRecord], group: &SubjectGroup) -> Result<SimilarityRecord> {
    let members: Vec<&SimilarityRecord> = records
        .iter()
        .filter(|r| group.contains(&r.subject_id))
        .collect();
    let first = members.first().ok_or_else(|| {
        Error::Completeness(format!("group {}: no records for any member", group.group_id))
    })?;
    for r in &members {
        if r.model_id != first.model_id || r.condition_id != first.condition_id {
            return Err(Error::Contract(format!(
                "group {}: records mix {}/{} and {}/{}",
                group.group_id, first.model_id, first.condition_id, r.model_id, r.condition_id
            )));
        }
        if r.n_stimuli != first.n_stimuli || r.seed != first.seed {
            return Err(Error::Contract(format!(
                "group {}: subject {} scored with n_stimuli={} seed={}, expected n_stimuli={} seed={}",
                group.group_id, r.subject_id, r.n_stimuli, r.seed, first.n_stimuli, first.seed
            )));
        }
    }

    let mut scores = Vec::with_capacity(group.subject_ids.len());
    for subject in &group.subject_ids {
        let mut hits = members.iter().filter(|r| &r.subject_id == subject);
        match (hits.next(), hits.next()) {
            (Some(r), None) => scores.push(r.score),
            (None, _) => {
                return Err(Error::Completeness(format!(
                    "group {}: no record for subject {subject} ({}/{})",
                    group.group_id, first.model_id, first.condition_id
                )))
            }
            (Some(_), Some(_)) => {
                return Err(Error::Completeness(format!(
                    "group {}: duplicate records for subject {subject} ({}/{})",
                    group.group_id, first.model_id, first.condition_id
                )))
            }
        }
    }

    Ok(SimilarityRecord {
        model_id: first.model_id.clone(),
        subject_id: group.group_id.clone(),
        condition_id: first.condition_id.clone(),
        n_stimuli: first.n_stimuli,
        seed: first.seed,
        score: mean(&scores)?,
    })
}

/// [`group_score`] for every (model, condition) in `records` and every
/// group, sorted by (model, group, condition).
pub fn group_scores(records: &[SimilarityRecord], groups: &[SubjectGroup]) -> Result<Vec<SimilarityRecord>> {
    let mut by_key: BTreeMap<(&str, &str), Vec<SimilarityRecord>> = BTreeMap::new();
    for r in records {
        by_key
            .entry((&r.model_id, &r.condition_id))
            .or_default()
            .push(r.clone());
    }
    let mut out = Vec::new();
    for subset in by_key.values() {
        for g in groups {
            out.push(group_score(subset, g)?);
        }
    }
    out.sort_by(|a, b| a.key().cmp(&b.key()));
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(subject: &str, score: f64) -> SimilarityRecord {
        SimilarityRecord {
            model_id: "LLaMA-7B".into(),
            subject_id: subject.into(),
            condition_id: "none".into(),
            n_stimuli: 627,
            seed: 1,
            score,
        }
    }

    fn g1() -> SubjectGroup {
        SubjectGroup::new("G1", vec!["P01".into(), "M02".into(), "M04".into(), "M07".into()]).unwrap()
    }

    #[test]
    fn singleton_group() {
        let g2 = SubjectGroup::new("G2", vec!["M15".into()]).unwrap();
        let out = group_score(&[rec("M15", 0.2470), rec("P01", 0.9)], &g2).unwrap();
        assert_eq!(out.score, 0.2470);
        assert_eq!(out.subject_id, "G2");
    }

    #[test]
    fn symmetric_mean() {
        let recs = [rec("P01", 0.20), rec("M02", 0.21), rec("M04", 0.19), rec("M07", 0.20)];
        let out = group_score(&recs, &g1()).unwrap();
        assert!((out.score - 0.20).abs() < 1e-15);
        assert_eq!(format!("{:.4}", out.score), "0.2000");
    }

    #[test]
    fn missing_and_duplicate_subjects() {
        let missing = [rec("P01", 0.2), rec("M02", 0.2), rec("M04", 0.2)];
        assert!(matches!(group_score(&missing, &g1()), Err(Error::Completeness(_))));
        let dup = [rec("P01", 0.2), rec("P01", 0.2), rec("M02", 0.2), rec("M04", 0.2), rec("M07", 0.2)];
        assert!(matches!(group_score(&dup, &g1()), Err(Error::Completeness(_))));
    }

    #[test]
    fn mixed_conditions_rejected() {
        let mut other = rec("M02", 0.2);
        other.condition_id = "explicit".into();
        let recs = [rec("P01", 0.2), other, rec("M04", 0.2), rec("M07", 0.2)];
        assert!(matches!(group_score(&recs, &g1()), Err(Error::Contract(_))));
    }

    #[test]
    fn all_keys_grouped() {
        let mut recs = vec![rec("P01", 0.1), rec("M02", 0.3), rec("M04", 0.2), rec("M07", 0.2)];
        for r in recs.clone() {
            recs.push(SimilarityRecord {
                condition_id: "explicit".into(),
                ..r
            });
        }
        let out = group_scores(&recs, &[g1()]).unwrap();
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].condition_id, "explicit");
        assert_eq!(out[1].condition_id, "none");
    }
}
