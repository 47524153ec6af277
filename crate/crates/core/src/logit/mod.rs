//! Binary logistic regression on keyword indicator features.
//!
//! Coefficient vectors are laid out intercept first, followed by one entry per
//! design column in column order.

mod design;
mod fit;
mod likelihood;
mod model;
mod paper;
mod univariate;

pub use design::DesignMatrix;
pub use fit::{fit_logistic, FitConfig};
pub use likelihood::{logistic, LogLikelihood};
pub use model::{
    predict, FittedModel, ModelFile, ModelTerm, ModelVariable, TermStats, TrainingInfo,
    MODEL_FORMAT_VERSION,
};
pub use paper::{paper_model, paper_model_from_table, reconcile_row, PublishedRow, PUBLISHED_TABLE};
pub use univariate::{univariate_screen, ScreenOutcome, UnivariateResult};

use thiserror::Error;

/// Two-sided normal quantile used for every Wald interval.
pub const Z_95: f64 = 1.96;

pub const INTERCEPT: &str = "(intercept)";

#[derive(Debug, Clone, PartialEq, Error)]
pub enum LogitError {
    #[error("{n} observations cannot identify {k} coefficients")]
    TooFewObservations { n: usize, k: usize },
    #[error("variable {0:?} is constant across all observations")]
    Degenerate(String),
    #[error("outcome is constant across all observations")]
    ConstantOutcome,
    #[error("separation detected; coefficients diverge for: {}", .0.join(", "))]
    Separation(Vec<String>),
    #[error("information matrix is singular (collinear features)")]
    Singular,
    #[error("expected {expected} feature values, got {actual}")]
    ArityMismatch { expected: usize, actual: usize },
    #[error("design has {rows} rows but {labels} outcome labels")]
    OutcomeLength { rows: usize, labels: usize },
    #[error("invalid model file: {0}")]
    InvalidModel(String),
}

/// Two-sided p-value of a standard normal statistic.
pub fn normal_two_sided_p(z: f64) -> f64 {
    statrs::function::erf::erfc(z.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
}
