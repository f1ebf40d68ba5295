//! Study orchestration: instruction conditions, emotion polarity, benchmark
//! correlation and report rendering.

pub mod benchmark;
pub mod condition;
pub mod delta;
pub mod polarity;
pub mod report;
pub mod study;

pub use benchmark::{benchmark_correlation, BenchmarkCorrelation, BenchmarkId, BenchmarkRow, BenchmarkTable, ScatterPoint};
pub use condition::{noisy_prefix, ConditionId, ConditionSpec, EXPLICIT_PREFIX};
pub use delta::{condition_delta, instruction_delta, read_deltas, write_deltas, ConditionDelta};
pub use polarity::{
    polarity_modes, polarity_similarity, select_polarity_extremes, PolarityEntry, PolarityExtremes,
    PolarityScorer, PolarityTable, RowProfile, SubRdm,
};
pub use report::{fmt4, render_report, ReportBundle};
pub use study::{parse_scale, ModelSpec, StudyConfig, TrainingStage};
