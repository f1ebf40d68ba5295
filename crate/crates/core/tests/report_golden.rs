//! Rendered report for the sixteen-model fixture compared with checked-in
//! golden files. Set `REPSIM_UPDATE_GOLDEN=1` to regenerate after review.

use std::fs;
use std::path::{Path, PathBuf};

use repsim::experiments::{
    benchmark_correlation, read_deltas, render_report, BenchmarkTable, ReportBundle, StudyConfig,
};
use repsim::rdm::read_records;

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn render() -> ReportBundle {
    let dir = fixtures();
    let config = StudyConfig::load(dir.join("study.json")).unwrap();
    let records = read_records(fs::File::open(dir.join("group_similarity.csv")).unwrap()).unwrap();
    let deltas = read_deltas(fs::File::open(dir.join("group_deltas.csv")).unwrap()).unwrap();
    let bench = BenchmarkTable::read_csv(fs::File::open(dir.join("synthetic_benchmarks.csv")).unwrap()).unwrap();
    let mut correlations = Vec::new();
    for b in bench.benchmarks() {
        for g in &config.groups {
            correlations.push(benchmark_correlation(&records, &bench, b, &g.group_id, Some("none")).unwrap());
        }
    }
    render_report(&config, &records, &deltas, &correlations).unwrap()
}

#[test]
fn sixteen_model_report_matches_golden() {
    let bundle = render();
    let golden = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden/report");
    if std::env::var_os("REPSIM_UPDATE_GOLDEN").is_some() {
        bundle.write_to(&golden).unwrap();
    }
    let mut on_disk = Vec::new();
    for entry in walk(&golden) {
        on_disk.push(entry.strip_prefix(&golden).unwrap().to_string_lossy().replace('\\', "/"));
    }
    on_disk.sort();
    let rendered: Vec<String> = bundle.files.keys().cloned().collect();
    assert_eq!(on_disk, rendered);
    for (rel, content) in &bundle.files {
        let expected = fs::read(golden.join(rel)).unwrap();
        assert!(expected == content.as_bytes(), "{rel} differs from golden");
    }
}

#[test]
fn table_rows_carry_fixture_values() {
    let bundle = render();
    let sim = &bundle.files["similarity.csv"];
    assert!(sim.contains("LLaMA-7B,Pre-training,0.2011,0.2470\n"));
    assert!(sim.contains("LLaMA2-70B-chat,SFT+RLHF,0.2659,0.3176\n"));
    assert!(bundle.files["instruction_delta.csv"].contains("Vicuna-7B-v1.3,SFT,0.0111,0.0322\n"));
}

#[test]
fn rendering_is_repeatable() {
    assert_eq!(render(), render());
}

fn walk(dir: &Path) -> Vec<PathBuf> {
    let mut out = Vec::new();
    for e in fs::read_dir(dir).unwrap() {
        let p = e.unwrap().path();
        if p.is_dir() {
            out.extend(walk(&p));
        } else {
            out.push(p);
        }
    }
    out
}
