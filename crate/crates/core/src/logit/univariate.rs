use serde::{Deserialize, Serialize};

use super::design::DesignMatrix;
use super::fit::{fit_logistic, FitConfig};
use super::model::TermStats;
use super::LogitError;

/// Single-predictor screen of one variable. Fit failures are recorded, not raised.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnivariateResult {
    pub variable_name: String,
    #[serde(flatten)]
    pub outcome: ScreenOutcome,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum ScreenOutcome {
    Estimated(TermStats),
    Separation,
    Degenerate,
    Singular,
    Failed { reason: String },
}

impl UnivariateResult {
    pub fn stats(&self) -> Option<&TermStats> {
        match &self.outcome {
            ScreenOutcome::Estimated(s) => Some(s),
            _ => None,
        }
    }

    pub fn p_value(&self) -> Option<f64> {
        self.stats().map(|s| s.p_value)
    }

    pub fn odds_ratio(&self) -> Option<f64> {
        self.stats().map(|s| s.odds_ratio)
    }
}

/// One intercept + single-variable fit per design column, in column order.
pub fn univariate_screen(design: &DesignMatrix, config: &FitConfig) -> Vec<UnivariateResult> {
    (0..design.n_vars())
        .map(|j| {
            let single = design.select_columns(&[j]);
            let outcome = match fit_logistic(&single, config) {
                Ok(model) => ScreenOutcome::Estimated(model.stats(1)),
                Err(LogitError::Separation(_)) => ScreenOutcome::Separation,
                Err(LogitError::Degenerate(_)) => ScreenOutcome::Degenerate,
                Err(LogitError::Singular) => ScreenOutcome::Singular,
                Err(e) => ScreenOutcome::Failed {
                    reason: e.to_string(),
                },
            };
            UnivariateResult {
                variable_name: design.names()[j].clone(),
                outcome,
            }
        })
        .collect()
}
