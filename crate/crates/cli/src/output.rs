use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use repsim::datamodel::io::atomic_write;
use repsim::{Error, Result};

use crate::OutputFormat;

/// A small table printed to stdout as CSV or Markdown.
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<const N: usize>(header: [&str; N]) -> Self {
        Table {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    pub fn render(&self, format: OutputFormat) -> String {
        match format {
            OutputFormat::Csv => {
                let mut w = csv_writer();
                w.write_record(&self.header).expect("in-memory csv");
                for r in &self.rows {
                    w.write_record(r).expect("in-memory csv");
                }
                String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
            }
            OutputFormat::Md => {
                let mut out = format!("| {} |\n", self.header.join(" | "));
                out.push_str(&format!("|{}\n", " --- |".repeat(self.header.len())));
                for r in &self.rows {
                    out.push_str(&format!("| {} |\n", r.join(" | ")));
                }
                out
            }
        }
    }
}

fn csv_writer() -> csv::Writer<Vec<u8>> {
    csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new())
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn file_digest(path: &Path) -> Result<String> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(sha256_hex(&bytes))
}

#[derive(Serialize)]
struct FileEntry {
    path: String,
    sha256: String,
}

#[derive(Serialize)]
struct RunManifest<'a> {
    tool: &'static str,
    version: &'static str,
    subcommand: &'a str,
    seed: u64,
    inputs: Vec<FileEntry>,
    outputs: Vec<FileEntry>,
}

/// Records what a run read and wrote. Written as `<primary output>.run.json`
/// and, when `REPSIM_CACHE_DIR` is set, copied to `$REPSIM_CACHE_DIR/runs/`.
pub struct RunLog {
    subcommand: &'static str,
    seed: u64,
    inputs: Vec<PathBuf>,
    outputs: Vec<PathBuf>,
}

impl RunLog {
    pub fn new(subcommand: &'static str, seed: u64) -> Self {
        RunLog {
            subcommand,
            seed,
            inputs: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn input(&mut self, path: impl AsRef<Path>) -> &mut Self {
        self.inputs.push(path.as_ref().to_path_buf());
        self
    }

    pub fn output(&mut self, path: impl AsRef<Path>) -> &mut Self {
        self.outputs.push(path.as_ref().to_path_buf());
        self
    }

    fn entries(paths: &[PathBuf]) -> Result<Vec<FileEntry>> {
        let mut out = Vec::new();
        for p in paths {
            if p.is_dir() {
                let mut files = Vec::new();
                collect_files(p, &mut files).map_err(|e| Error::io(p, e))?;
                files.sort();
                for f in files {
                    out.push(FileEntry {
                        sha256: file_digest(&f)?,
                        path: f.display().to_string(),
                    });
                }
            } else {
                out.push(FileEntry {
                    sha256: file_digest(p)?,
                    path: p.display().to_string(),
                });
            }
        }
        Ok(out)
    }

    /// Write the manifest next to `primary` (a file or directory path).
    pub fn finish(&self, primary: &Path) -> Result<PathBuf> {
        let manifest = RunManifest {
            tool: "repsim",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: self.subcommand,
            seed: self.seed,
            inputs: Self::entries(&self.inputs)?,
            outputs: Self::entries(&self.outputs)?,
        };
        let mut json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        json.push('\n');
        let mut name = primary.as_os_str().to_owned();
        name.push(".run.json");
        let path = PathBuf::from(name);
        atomic_write(&path, json.as_bytes())?;

        if let Some(cache) = cache_dir() {
            let runs = cache.join("runs");
            fs::create_dir_all(&runs).map_err(|e| Error::io(&runs, e))?;
            let digest = sha256_hex(json.as_bytes());
            atomic_write(runs.join(format!("{}-{}.json", self.subcommand, &digest[..16])), json.as_bytes())?;
        }
        Ok(path)
    }
}

fn collect_files(dir: &Path, out: &mut Vec<PathBuf>) -> std::io::Result<()> {
    for e in fs::read_dir(dir)? {
        let p = e?.path();
        if p.is_dir() {
            collect_files(&p, out)?;
        } else {
            out.push(p);
        }
    }
    Ok(())
}

pub fn cache_dir() -> Option<PathBuf> {
    std::env::var_os("REPSIM_CACHE_DIR")
        .filter(|v| !v.is_empty())
        .map(PathBuf::from)
}
