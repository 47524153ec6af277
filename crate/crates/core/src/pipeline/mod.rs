//! Ingestion, the generation/validation split, the study driver and scoring.

mod dataset;
mod score;
mod selection;
mod split;
mod study;

pub use dataset::{
    ingest, parse_csv, parse_json, write_csv, Dataset, Format, IngestError, Provenance, Summary,
};
pub use score::{read_score_input, InputFormat, ScoreError, ScoreLine, ScoredRecord, Scorer};
pub use selection::{
    ForcedInclusion, SelectionContext, SelectionRegistry, SignificantOnly, VariableSelection,
};
pub use split::{split, SplitError, SplitPlan, SPLIT_RNG};
pub use study::{
    evaluate_model, run_study, run_study_with, Candidate, EvaluationReport, GroupEvaluation,
    Group, RecordOutput, StudyConfig, StudyError, StudyOutcome, StudyReport,
};
