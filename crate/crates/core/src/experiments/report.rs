//! Deterministic CSV and Markdown tables for a finished study.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::rdm::SimilarityRecord;

use super::benchmark::BenchmarkCorrelation;
use super::delta::ConditionDelta;
use super::study::{ModelSpec, StudyConfig};

/// Rendered report files keyed by relative path, plus notices about
/// omitted sections.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct ReportBundle {
    pub files: BTreeMap<String, String>,
    pub notices: Vec<String>,
}

impl ReportBundle {
    /// Write every file under `dir`. The directory is assembled next to the
    /// target and renamed into place, replacing any previous report.
    pub fn write_to(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        let staging = crate::datamodel::io::temp_sibling(dir);
        let result = (|| -> std::io::Result<()> {
            if staging.exists() {
                fs::remove_dir_all(&staging)?;
            }
            for (rel, content) in &self.files {
                let path = staging.join(rel);
                if let Some(parent) = path.parent() {
                    fs::create_dir_all(parent)?;
                }
                fs::write(path, content)?;
            }
            if dir.exists() {
                fs::remove_dir_all(dir)?;
            }
            fs::rename(&staging, dir)
        })();
        if let Err(e) = result {
            let _ = fs::remove_dir_all(&staging);
            return Err(Error::io(dir, e));
        }
        Ok(())
    }
}

/// Fixed 4-decimal formatting; negative zero prints as `0.0000`.
pub fn fmt4(v: f64) -> String {
    let s = format!("{v:.4}");
    if s == "-0.0000" {
        "0.0000".into()
    } else {
        s
    }
}

fn csv_string(rows: &[Vec<String>]) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    for r in rows {
        w.write_record(r).expect("in-memory csv write");
    }
    String::from_utf8(w.into_inner().expect("in-memory csv flush")).expect("utf-8 csv")
}

fn md_table(header: &[String], numeric_from: usize, rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&format!("| {} |\n", header.join(" | ")));
    let rule: Vec<&str> = (0..header.len())
        .map(|i| if i >= numeric_from { "---:" } else { "---" })
        .collect();
    out.push_str(&format!("| {} |\n", rule.join(" | ")));
    for r in rows {
        out.push_str(&format!("| {} |\n", r.join(" | ")));
    }
    out
}

struct Section {
    name: &'static str,
    title: String,
    header: Vec<String>,
    numeric_from: usize,
    /// Rows for the CSV file.
    csv_rows: Vec<Vec<String>>,
    /// Rows for the Markdown table (may carry an extra leading column).
    md_header: Vec<String>,
    md_rows: Vec<Vec<String>>,
}

impl Section {
    fn render_into(&self, bundle: &mut ReportBundle, index: &mut String) {
        let mut csv_rows = vec![self.header.clone()];
        csv_rows.extend(self.csv_rows.iter().cloned());
        bundle.files.insert(format!("{}.csv", self.name), csv_string(&csv_rows));

        let md = format!(
            "## {}\n\n{}",
            self.title,
            md_table(&self.md_header, self.numeric_from + self.md_header.len() - self.header.len(), &self.md_rows)
        );
        bundle.files.insert(format!("{}.md", self.name), md.clone());
        index.push('\n');
        index.push_str(&md);
    }
}

/// Markdown rows with a leading scale column shown once per scale block.
fn with_scale_column(models: &[&ModelSpec], rows: &[Vec<String>]) -> Vec<Vec<String>> {
    let mut prev: Option<&str> = None;
    models
        .iter()
        .zip(rows)
        .map(|(m, r)| {
            let scale = if prev == Some(m.scale_label.as_str()) {
                String::new()
            } else {
                m.scale_label.clone()
            };
            prev = Some(&m.scale_label);
            let mut row = vec![scale];
            row.extend(r.iter().cloned());
            row
        })
        .collect()
}

/// Render the similarity table, the instruction delta table and the
/// benchmark correlations.
///
/// `records` must hold one group-level record per (configured model, group)
/// under `config.report_condition`. Empty `deltas` or `correlations` omit
/// their section with a notice; partially filled sections are an error that
/// lists what is missing.
pub fn render_report(
    config: &StudyConfig,
    records: &[SimilarityRecord],
    deltas: &[ConditionDelta],
    correlations: &[BenchmarkCorrelation],
) -> Result<ReportBundle> {
    let models = config.ordered_models()?;
    let groups: Vec<&str> = config.groups.iter().map(|g| g.group_id.as_str()).collect();
    let mut missing: BTreeMap<&'static str, Vec<String>> = BTreeMap::new();
    let mut bundle = ReportBundle::default();
    let mut index = format!("# Report: {}\n", config.dataset_id);

    let value_header = |first: &[&str]| -> Vec<String> {
        first.iter().map(|s| s.to_string()).chain(groups.iter().map(|g| g.to_string())).collect()
    };

    // similarity
    let mut sim_rows = Vec::new();
    for m in &models {
        let mut row = vec![m.model_id.clone(), m.training_stage.label().to_owned()];
        for g in &groups {
            let hit = records.iter().find(|r| {
                r.model_id == m.model_id && r.subject_id == *g && r.condition_id == config.report_condition
            });
            match hit {
                Some(r) => row.push(fmt4(r.score)),
                None => {
                    missing
                        .entry("similarity")
                        .or_default()
                        .push(format!("{}/{g}", m.model_id));
                    row.push(String::new());
                }
            }
        }
        sim_rows.push(row);
    }
    let similarity = Section {
        name: "similarity",
        title: format!("Similarity (condition: {})", config.report_condition),
        header: value_header(&["model", "training_stage"]),
        numeric_from: 2,
        md_header: value_header(&["Scale", "Model", "Training Stage"]),
        md_rows: with_scale_column(&models, &sim_rows),
        csv_rows: sim_rows,
    };

    // instruction delta
    let delta_section = if deltas.is_empty() {
        bundle
            .notices
            .push("section instruction_delta omitted: no condition deltas supplied".into());
        None
    } else {
        let (treatment, baseline) = (&deltas[0].treatment, &deltas[0].baseline);
        if let Some(d) = deltas.iter().find(|d| &d.treatment != treatment || &d.baseline != baseline) {
            return Err(Error::Contract(format!(
                "deltas mix {treatment}-{baseline} and {}-{}",
                d.treatment, d.baseline
            )));
        }
        let mut rows = Vec::new();
        for m in &models {
            let mut row = vec![m.model_id.clone(), m.training_stage.label().to_owned()];
            for g in &groups {
                match deltas.iter().find(|d| d.model_id == m.model_id && d.group_id == *g) {
                    Some(d) => row.push(fmt4(d.delta)),
                    None => {
                        missing
                            .entry("instruction_delta")
                            .or_default()
                            .push(format!("{}/{g}", m.model_id));
                        row.push(String::new());
                    }
                }
            }
            rows.push(row);
        }
        Some(Section {
            name: "instruction_delta",
            title: format!("Score change ({treatment} - {baseline})"),
            header: value_header(&["model", "training_stage"]),
            numeric_from: 2,
            md_header: value_header(&["Scale", "Model", "Training Stage"]),
            md_rows: with_scale_column(&models, &rows),
            csv_rows: rows,
        })
    };

    // benchmark correlations
    let corr_section = if correlations.is_empty() {
        bundle
            .notices
            .push("section benchmark_correlation omitted: no benchmark correlations supplied".into());
        None
    } else {
        let group_rank = |g: &str| groups.iter().position(|x| *x == g).unwrap_or(usize::MAX);
        let mut sorted: Vec<&BenchmarkCorrelation> = correlations.iter().collect();
        sorted.sort_by(|a, b| {
            a.benchmark_id
                .as_str()
                .cmp(b.benchmark_id.as_str())
                .then(group_rank(&a.group_id).cmp(&group_rank(&b.group_id)))
                .then(a.group_id.cmp(&b.group_id))
        });
        let rows: Vec<Vec<String>> = sorted
            .iter()
            .map(|c| {
                vec![
                    c.benchmark_id.to_string(),
                    c.group_id.clone(),
                    c.points.len().to_string(),
                    fmt4(c.r),
                ]
            })
            .collect();
        for c in &sorted {
            let mut scatter = vec![vec!["model_id".to_owned(), "sim".to_owned(), "score".to_owned()]];
            scatter.extend(
                c.points
                    .iter()
                    .map(|p| vec![p.model_id.clone(), fmt4(p.sim), fmt4(p.score)]),
            );
            bundle.files.insert(
                format!("scatter/{}_{}.csv", c.benchmark_id, c.group_id),
                csv_string(&scatter),
            );
        }
        let header: Vec<String> = ["benchmark", "group", "n_models", "r"].map(String::from).to_vec();
        Some(Section {
            name: "benchmark_correlation",
            title: "Correlation with external evaluations".into(),
            header: header.clone(),
            numeric_from: 2,
            md_header: ["Benchmark", "Group", "Models", "r"].map(String::from).to_vec(),
            md_rows: rows.clone(),
            csv_rows: rows,
        })
    };

    if !missing.is_empty() {
        let listed: Vec<String> = missing
            .iter()
            .map(|(section, items)| format!("{section} (missing {})", items.join(", ")))
            .collect();
        return Err(Error::Completeness(format!("incomplete sections: {}", listed.join("; "))));
    }

    similarity.render_into(&mut bundle, &mut index);
    for s in [delta_section, corr_section].into_iter().flatten() {
        s.render_into(&mut bundle, &mut index);
    }
    if !bundle.notices.is_empty() {
        index.push('\n');
        for n in &bundle.notices {
            index.push_str(&format!("notice: {n}\n"));
        }
    }
    bundle.files.insert("report.md".into(), index);
    Ok(bundle)
}
