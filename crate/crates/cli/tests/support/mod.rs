//! Shared helpers for driving the `repsim` binary on generated inputs.
#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::json;

pub fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_repsim"));
    cmd.env_remove("REPSIM_CACHE_DIR");
    cmd
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn repsim")
}

pub fn run_in(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().expect("spawn repsim")
}

pub fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

pub fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

pub fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

#[track_caller]
pub fn ok(o: &Output) -> String {
    assert_eq!(code(o), 0, "stderr: {}", stderr(o));
    stdout(o)
}

pub fn stimulus_ids(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("c{i:03}")).collect()
}

pub fn write_manifest(path: &Path, dataset_id: &str, n: usize) {
    let stimuli: Vec<_> = stimulus_ids(n)
        .into_iter()
        .map(|id| json!({"stimulus_id": id, "text": format!("word {id}"), "kind": "concept"}))
        .collect();
    let doc = json!({"dataset_id": dataset_id, "stimuli": stimuli});
    fs::write(path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
}

/// `stimulus_id,0,1,...` CSV with one row per stimulus.
pub fn write_csv_matrix(path: &Path, rows: &[Vec<f64>]) {
    let dim = rows[0].len();
    let mut s = String::from("stimulus_id");
    for j in 0..dim {
        s.push_str(&format!(",{j}"));
    }
    s.push('\n');
    for (i, row) in rows.iter().enumerate() {
        s.push_str(&format!("c{i:03}"));
        for v in row {
            s.push_str(&format!(",{v:?}"));
        }
        s.push('\n');
    }
    fs::write(path, s).unwrap();
}

/// Volume JSON with shape `[d1, d2, d3]`; `rows[i]` is the flattened scan.
/// Positions listed in `invalid` become `null` in every scan.
pub fn write_volume(path: &Path, subject: &str, shape: [usize; 3], rows: &[Vec<f64>], invalid: &[usize]) {
    let [d1, d2, d3] = shape;
    let scans: Vec<_> = rows
        .iter()
        .map(|row| {
            (0..d1)
                .map(|i| {
                    (0..d2)
                        .map(|j| {
                            (0..d3)
                                .map(|k| {
                                    let idx = (i * d2 + j) * d3 + k;
                                    if invalid.contains(&idx) {
                                        serde_json::Value::Null
                                    } else {
                                        json!(row[idx])
                                    }
                                })
                                .collect::<Vec<_>>()
                        })
                        .collect::<Vec<_>>()
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let doc = json!({"subject_id": subject, "shape": shape, "scans": scans});
    fs::write(path, serde_json::to_string(&doc).unwrap()).unwrap();
}

pub fn random_rows(n: usize, dim: usize, seed: u64) -> Vec<Vec<f64>> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
    (0..n)
        .map(|_| (0..dim).map(|_| rng.gen_range(-1.0..1.0)).collect())
        .collect()
}

pub fn core_fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

pub fn core_golden() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/golden/report")
}

pub fn p(path: &Path) -> &str {
    path.to_str().expect("utf-8 path")
}
