//! The published 14-variable screening model.
//!
//! The printed "Estimated Coefficient" and "Standard Error" columns of the
//! published table disagree with its own odds-ratio and interval columns on
//! several rows (e.g. Game Labels prints 0.45 next to OR 25.38 and interval
//! 2.33–4.12). The frozen coefficients are therefore ln(OR), cross-checked
//! against the interval midpoint. The intercept keeps its printed value since
//! its OR is printed to a single significant digit. A row whose printed
//! coefficient sits within `CONSISTENCY_TOL` of its interval midpoint keeps
//! its printed standard error; otherwise the error is recovered from the
//! interval width.

use super::model::{FittedModel, ModelVariable, TrainingInfo};
use super::{LogitError, Z_95};
use crate::text::VariableGrouping;

const PAPER_MODEL_JSON: &str = include_str!("../../data/paper_model.json");

const CONSISTENCY_TOL: f64 = 0.05;

/// Training-group size of the published model.
pub const PUBLISHED_N_OBS: usize = 823;

/// One row exactly as printed. Interval bounds are on the coefficient scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PublishedRow {
    pub name: &'static str,
    pub coefficient: f64,
    pub standard_error: f64,
    pub p_value: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub odds_ratio: f64,
}

const fn row(
    name: &'static str,
    coefficient: f64,
    standard_error: f64,
    p_value: f64,
    ci_low: f64,
    ci_high: f64,
    odds_ratio: f64,
) -> PublishedRow {
    PublishedRow {
        name,
        coefficient,
        standard_error,
        p_value,
        ci_low,
        ci_high,
        odds_ratio,
    }
}

/// Variable rows in printed (alphabetical) order, constant last.
pub const PUBLISHED_TABLE: [PublishedRow; 15] = [
    row("Activity Tracking", 3.17, 0.27, 0.000, 2.62, 3.72, 23.91),
    row("Change", 0.32, 0.32, 0.779, -0.54, 0.72, 1.09),
    row("Diary", 2.67, 0.77, 0.001, 1.15, 4.19, 14.53),
    row("Engagement", 0.55, 0.55, 0.041, 0.04, 2.22, 3.11),
    row("Entertainment", 0.27, 0.27, 0.072, -0.04, 1.03, 1.64),
    row("Game Labels", 0.45, 0.45, 0.000, 2.33, 4.12, 25.38),
    row("Player Aspects", 0.48, 0.48, 0.328, -1.41, 0.47, 0.62),
    row("Progress", 0.39, 0.39, 0.075, -0.07, 1.48, 2.03),
    row("Purpose", 0.67, 0.67, 0.186, -2.21, 0.43, 0.40),
    row("Quest", 0.32, 0.32, 0.092, -1.18, 0.09, 0.57),
    row("Quizzes", 0.64, 0.64, 0.000, 1.94, 4.45, 24.44),
    row("Routine", 1.42, 0.95, 0.134, -0.43, 3.28, 4.14),
    row("Statistics", 1.34, 0.56, 0.018, 0.23, 2.46, 3.84),
    row("Story", 0.96, 0.43, 0.025, 0.12, 1.80, 2.62),
    row("Constant", -2.85, 0.19, 0.000, -3.23, -2.47, 0.05),
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reconciled {
    pub coefficient: f64,
    pub standard_error: f64,
    /// Printed coefficient agrees with the interval midpoint.
    pub consistent: bool,
}

impl PublishedRow {
    pub fn is_constant(&self) -> bool {
        self.name == "Constant"
    }

    pub fn ci_midpoint(&self) -> f64 {
        0.5 * (self.ci_low + self.ci_high)
    }

    pub fn ci_standard_error(&self) -> f64 {
        (self.ci_high - self.ci_low) / (2.0 * Z_95)
    }
}

pub fn reconcile_row(row: &PublishedRow) -> Reconciled {
    let coefficient = if row.is_constant() {
        row.coefficient
    } else {
        row.odds_ratio.ln()
    };
    let consistent = (row.coefficient - row.ci_midpoint()).abs() <= CONSISTENCY_TOL;
    let standard_error = if consistent {
        row.standard_error
    } else {
        row.ci_standard_error()
    };
    Reconciled {
        coefficient,
        standard_error,
        consistent,
    }
}

/// Builds the frozen model from the printed table, ordering variables as in
/// `grouping` and attaching its keyword lists.
pub fn paper_model_from_table(grouping: &VariableGrouping) -> Result<FittedModel, LogitError> {
    let find = |name: &str| {
        PUBLISHED_TABLE
            .iter()
            .find(|r| r.name == name)
            .ok_or_else(|| LogitError::InvalidModel(format!("no published row for {name:?}")))
    };
    let mut terms = vec![reconcile_row(find("Constant")?)];
    let mut variables = Vec::new();
    for var in grouping.variables() {
        terms.push(reconcile_row(find(&var.name)?));
        variables.push(ModelVariable {
            name: var.name.clone(),
            keywords: var.keywords.clone(),
        });
    }
    let k = terms.len();
    let covariance = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| if i == j { terms[i].standard_error.powi(2) } else { 0.0 })
                .collect()
        })
        .collect();
    FittedModel::new(
        variables,
        terms.iter().map(|t| t.coefficient).collect(),
        covariance,
        TrainingInfo {
            n_obs: PUBLISHED_N_OBS,
            converged: true,
            ..TrainingInfo::default()
        },
    )
}

/// The frozen published model, loaded from the embedded model file.
pub fn paper_model() -> FittedModel {
    FittedModel::from_json(PAPER_MODEL_JSON).expect("embedded paper model is valid")
}
