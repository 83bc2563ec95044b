//! Approximation machinery: baselines, at-most to exact conversion,
//! preprocessing into left-regular candidates, the caterpillar schedule, the
//! planted-instance algorithm and the worst-case step pipeline.

mod baseline;
mod planted;
mod preprocess;
mod schedule;
mod steps;
mod worst;

pub use baseline::{exact_from_atmost, les_trim, trim_lex, trivial_ksubset};
pub use planted::{solve_planted, PlantedRun};
pub use preprocess::{
    bucket_and_regularize, preprocess, solve_gamma, subsample_left, Bucket, PreprocessConfig,
    PreprocessedInstance,
};
pub use schedule::{caterpillar_schedule, snap_alpha, CaterpillarSchedule, Step};
pub use steps::{backbone_step, final_step, first_step, hair_step, BranchState, StepOutcome};
pub use worst::{atmost_pipeline, solve_worst_case, solve_worst_case_report, WorstCaseConfig, WorstCaseReport};
