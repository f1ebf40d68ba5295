use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use repsim::Error;

mod commands;
mod output;

#[derive(Debug, Parser)]
#[command(name = "repsim", version, about = "Representational similarity between model embeddings and brain recordings")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalOpts {
    /// Seed for every randomized step (voxel sampling, permutations)
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,

    /// Worker threads for parallel fan-out; results do not depend on it
    #[arg(long, global = true, default_value_t = 1)]
    pub jobs: usize,

    /// Layout of tables printed to stdout
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,

    /// Suppress progress messages on stderr
    #[arg(short, long, global = true)]
    pub quiet: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Md,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModalityArg {
    Brain,
    Model,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Flatten a subject's 3-D volumes (JSON) into a matrix file
    Flatten {
        /// Volume JSON: {"subject_id", "shape": [d1,d2,d3], "scans": [...]}
        #[arg(long = "in")]
        input: PathBuf,
        /// Stimulus manifest JSON
        #[arg(long)]
        manifest: PathBuf,
        /// Output matrix file
        #[arg(long)]
        out: PathBuf,
    },

    /// Keep a seeded random subset of valid (non-NaN) voxels
    SampleVoxels {
        /// Flattened brain matrix file
        #[arg(long = "in")]
        input: PathBuf,
        /// Stimulus manifest JSON
        #[arg(long)]
        manifest: PathBuf,
        /// Number of voxels to keep
        #[arg(long = "n", default_value_t = 1000)]
        n_voxels: usize,
        /// Output matrix file
        #[arg(long)]
        out: PathBuf,
    },

    /// Build a dissimilarity matrix (1 - Pearson) from representations
    Rdm {
        /// Representation matrix file, or CSV (stimulus_id,0,1,...)
        #[arg(long = "in")]
        input: PathBuf,
        /// Stimulus manifest JSON
        #[arg(long)]
        manifest: PathBuf,
        /// Output RDM file; a JSON descriptor is written to <out>.json
        #[arg(long)]
        out: PathBuf,
        /// Whether the representations come from a brain or a model
        #[arg(long, value_enum, default_value_t = ModalityArg::Model)]
        modality: ModalityArg,
    },

    /// Score a model RDM against a brain RDM
    Sim(SimArgs),

    /// Correlate one stimulus's dissimilarity profile across RDMs
    RowSim {
        #[command(flatten)]
        pair: RdmPair,
        /// Stimulus id whose row profile is compared
        #[arg(long)]
        stimulus: String,
    },

    /// Average per-subject records into group records
    Group {
        /// Similarity CSV files (model_id,subject_id,condition_id,n_stimuli,seed,score)
        #[arg(long, required = true, num_args = 1..)]
        records: Vec<PathBuf>,
        /// Groups JSON: {"groups": [{"group_id", "subject_ids"}]}
        #[arg(long)]
        groups: PathBuf,
        /// Also write the group records to this CSV file
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Stimulus-label permutation test for a similarity score
    PermTest {
        #[command(flatten)]
        pair: RdmPair,
        /// Number of permutations (at least 100)
        #[arg(long, default_value_t = 1000)]
        n_perm: usize,
        /// Also write the result as JSON
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Score change between two instruction conditions per model and group
    InstructionDelta {
        /// Group-level similarity CSV files
        #[arg(long, required = true, num_args = 1..)]
        records: Vec<PathBuf>,
        /// Condition whose scores are the minuend
        #[arg(long, default_value = "explicit")]
        treatment: String,
        /// Condition subtracted from the treatment
        #[arg(long, default_value = "none")]
        baseline: String,
        /// Also write the deltas to this CSV file
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Similarity over the most positive and most negative concepts
    Emotion {
        #[command(flatten)]
        pair: RdmPair,
        /// Polarity CSV (concept_id,score)
        #[arg(long)]
        polarity: PathBuf,
        /// Concepts per polarity
        #[arg(long, default_value_t = 10)]
        k: usize,
        /// Scoring mode (row_profile or sub_rdm)
        #[arg(long, default_value = "row_profile")]
        mode: String,
        /// Also write the result table to this CSV file
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Correlate similarity scores with an external benchmark
    BenchCorr {
        /// Group-level similarity CSV files
        #[arg(long, required = true, num_args = 1..)]
        records: Vec<PathBuf>,
        /// Benchmark CSV (model_id,benchmark_id,score)
        #[arg(long)]
        bench: PathBuf,
        /// Benchmark to correlate (MMLU, HellaSwag, ArenaElo, AlpacaEval or other id)
        #[arg(long)]
        benchmark: String,
        /// Group id whose scores are used
        #[arg(long)]
        group: String,
        /// Only use records of this condition
        #[arg(long)]
        condition: Option<String>,
        /// Write scatter points (model_id,sim,score) to this CSV file
        #[arg(long)]
        scatter_out: Option<PathBuf>,
    },

    /// Render the study report (CSV and Markdown tables, scatter CSVs)
    Report {
        /// Study config JSON
        #[arg(long)]
        config: PathBuf,
        /// Group-level similarity CSV files
        #[arg(long, required = true, num_args = 1..)]
        records: Vec<PathBuf>,
        /// Benchmark CSV; adds correlation section and scatter files
        #[arg(long)]
        bench: Option<PathBuf>,
        /// Precomputed delta CSV; otherwise explicit - none is derived from the records
        #[arg(long)]
        deltas: Option<PathBuf>,
        /// Report directory (replaced atomically)
        #[arg(long)]
        out_dir: PathBuf,
    },

    /// Check files against their formats
    Validate {
        /// Files to check
        #[arg(required = true)]
        paths: Vec<PathBuf>,
        /// File kind; auto detects from content
        #[arg(long, value_enum, default_value_t = FileKind::Auto)]
        kind: FileKind,
        /// Manifest to check matrix row counts and polarity concepts against
        #[arg(long)]
        manifest: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct RdmPair {
    /// Brain RDM file, or brain representation matrix (needs --manifest)
    #[arg(long)]
    pub brain: PathBuf,
    /// Model RDM file, or model representation matrix (needs --manifest)
    #[arg(long)]
    pub model: PathBuf,
    /// Stimulus manifest JSON
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimArgs {
    #[command(flatten)]
    pub pair: RdmPair,
    /// Model id recorded in the output
    #[arg(long)]
    pub model_id: String,
    /// Subject id recorded in the output
    #[arg(long)]
    pub subject_id: String,
    /// Condition id recorded in the output
    #[arg(long, default_value = "none")]
    pub condition: String,
    /// RDM vectorization (upper_triangle, off_diagonal, full_matrix)
    #[arg(long, default_value = "upper_triangle")]
    pub vectorizer: String,
    /// Write the record to this CSV file
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Add to an existing --out file instead of replacing it
    #[arg(long, requires = "out")]
    pub append: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FileKind {
    Auto,
    Matrix,
    Rdm,
    Manifest,
    Groups,
    Config,
    Volume,
    Records,
    Polarity,
    Bench,
    Deltas,
}

/// Exit code for each library error class.
pub fn exit_code(err: &Error) -> u8 {
    match err {
        Error::Degenerate(_) => 3,
        Error::Completeness(_) | Error::InsufficientData(_) => 4,
        Error::Format(_)
        | Error::Contract(_)
        | Error::Capacity { .. }
        | Error::Configuration(_)
        | Error::Io { .. } => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if cli.global.jobs == 0 {
        eprintln!("error: --jobs must be at least 1");
        return ExitCode::from(1);
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cli.global.jobs).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(1);
        }
    };
    match pool.install(|| commands::run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn help_documents_every_flag() {
        let mut root = Cli::command();
        root.build();
        let subs: Vec<clap::Command> = root.get_subcommands().filter(|s| s.get_name() != "help").cloned().collect();
        assert_eq!(subs.len(), 12);
        for mut sub in subs {
            let name = sub.get_name().to_owned();
            assert!(sub.get_about().is_some(), "{name} has no description");
            let help = sub.render_long_help().to_string();
            for arg in sub.get_arguments() {
                if arg.is_hide_set() {
                    continue;
                }
                assert!(arg.get_help().is_some(), "{name}: {} undocumented", arg.get_id());
                if let Some(long) = arg.get_long() {
                    assert!(help.contains(&format!("--{long}")), "{name} help lacks --{long}");
                }
            }
        }
    }

    #[test]
    fn every_error_class_has_one_code() {
        let cases = [
            (Error::Format(String::new()), 2),
            (Error::Contract(String::new()), 2),
            (Error::Configuration(String::new()), 2),
            (Error::Capacity { requested: 2, available: 1 }, 2),
            (Error::io("x", std::io::Error::other("x")), 2),
            (Error::Degenerate(String::new()), 3),
            (Error::Completeness(String::new()), 4),
            (Error::InsufficientData(String::new()), 4),
        ];
        for (err, code) in cases {
            assert_eq!(exit_code(&err), code, "{err:?}");
        }
    }
}
