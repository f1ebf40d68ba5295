use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rdm::SimilarityRecord;
use crate::stats::pearson;

/// External evaluation a model was scored on.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BenchmarkId {
    Mmlu,
    HellaSwag,
    ArenaElo,
    AlpacaEval,
    Other(String),
}

impl BenchmarkId {
    pub fn as_str(&self) -> &str {
        match self {
            BenchmarkId::Mmlu => "MMLU",
            BenchmarkId::HellaSwag => "HellaSwag",
            BenchmarkId::ArenaElo => "ArenaElo",
            BenchmarkId::AlpacaEval => "AlpacaEval",
            BenchmarkId::Other(s) => s,
        }
    }
}

impl fmt::Display for BenchmarkId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for BenchmarkId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "MMLU" => BenchmarkId::Mmlu,
            "HellaSwag" => BenchmarkId::HellaSwag,
            "ArenaElo" => BenchmarkId::ArenaElo,
            "AlpacaEval" => BenchmarkId::AlpacaEval,
            "" => return Err(Error::Format("empty benchmark_id".into())),
            other => BenchmarkId::Other(other.to_owned()),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkRow {
    pub model_id: String,
    pub benchmark_id: BenchmarkId,
    pub score: f64,
}

#[derive(Deserialize)]
struct RawRow {
    model_id: String,
    benchmark_id: String,
    score: f64,
}

/// One score per (model, benchmark).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct BenchmarkTable {
    rows: Vec<BenchmarkRow>,
}

impl BenchmarkTable {
    pub fn new(rows: Vec<BenchmarkRow>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for r in &rows {
            if !r.score.is_finite() {
                return Err(Error::Format(format!(
                    "{} {}: non-finite score",
                    r.model_id, r.benchmark_id
                )));
            }
            if !seen.insert((r.model_id.as_str(), &r.benchmark_id)) {
                return Err(Error::Format(format!(
                    "{} has two {} scores",
                    r.model_id, r.benchmark_id
                )));
            }
        }
        Ok(BenchmarkTable { rows })
    }

    /// CSV with header `model_id,benchmark_id,score`.
    pub fn read_csv(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        if rdr.headers()?.iter().ne(["model_id", "benchmark_id", "score"]) {
            return Err(Error::Format("benchmark csv header must be model_id,benchmark_id,score".into()));
        }
        let mut rows = Vec::new();
        for raw in rdr.deserialize() {
            let raw: RawRow = raw?;
            rows.push(BenchmarkRow {
                model_id: raw.model_id,
                benchmark_id: raw.benchmark_id.parse()?,
                score: raw.score,
            });
        }
        BenchmarkTable::new(rows)
    }

    pub fn rows(&self) -> &[BenchmarkRow] {
        &self.rows
    }

    pub fn benchmarks(&self) -> BTreeSet<&BenchmarkId> {
        self.rows.iter().map(|r| &r.benchmark_id).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterPoint {
    pub model_id: String,
    pub sim: f64,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkCorrelation {
    pub benchmark_id: BenchmarkId,
    pub group_id: String,
    pub r: f64,
    /// Joined models, sorted by model id.
    pub points: Vec<ScatterPoint>,
}

/// Pearson correlation between similarity scores of `group_id` and one
/// benchmark, over the models present in both.
///
/// When `condition` is `None` every model must have a single record for the
/// group; otherwise only records of that condition are used.
pub fn benchmark_correlation(
    sims: &[SimilarityRecord],
    bench: &BenchmarkTable,
    benchmark_id: &BenchmarkId,
    group_id: &str,
    condition: Option<&str>,
) -> Result<BenchmarkCorrelation> {
    let mut sim_by_model: BTreeMap<&str, f64> = BTreeMap::new();
    for r in sims
        .iter()
        .filter(|r| r.subject_id == group_id && condition.is_none_or(|c| r.condition_id == c))
    {
        if sim_by_model.insert(&r.model_id, r.score).is_some() {
            return Err(Error::Contract(format!(
                "model {} has several {group_id} records; pick a condition",
                r.model_id
            )));
        }
    }

    let mut points: Vec<ScatterPoint> = bench
        .rows
        .iter()
        .filter(|b| &b.benchmark_id == benchmark_id)
        .filter_map(|b| {
            sim_by_model.get(b.model_id.as_str()).map(|&sim| ScatterPoint {
                model_id: b.model_id.clone(),
                sim,
                score: b.score,
            })
        })
        .collect();
    points.sort_by(|a, b| a.model_id.cmp(&b.model_id));

    if points.len() < 3 {
        return Err(Error::InsufficientData(format!(
            "{benchmark_id} vs {group_id}: only {} models joined, need 3",
            points.len()
        )));
    }
    let xs: Vec<f64> = points.iter().map(|p| p.sim).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.score).collect();
    let r = pearson(&xs, &ys).map_err(|e| e.context(format!("{benchmark_id} vs {group_id}")))?;
    Ok(BenchmarkCorrelation {
        benchmark_id: benchmark_id.clone(),
        group_id: group_id.to_owned(),
        r,
        points,
    })
}
