use std::path::Path;

use serde::{Deserialize, Serialize};

use super::likelihood::logistic;
use super::{normal_two_sided_p, LogitError, INTERCEPT, Z_95};
use crate::text::{FeatureVector, Variable, VariableGrouping};

pub const MODEL_FORMAT_VERSION: u32 = 1;

/// A model column and the keywords that switch it on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModelVariable {
    pub name: String,
    #[serde(default)]
    pub keywords: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainingInfo {
    pub n_obs: usize,
    pub log_likelihood: Option<f64>,
    pub converged: bool,
    pub iterations: usize,
    pub seed: Option<u64>,
    pub rng: Option<String>,
    pub timestamp: Option<String>,
}

/// Coefficients, covariance and fit metadata of a logistic model.
///
/// Odds ratios, Wald intervals, z statistics and p-values are all derived
/// from the coefficients and covariance on demand.
#[derive(Debug, Clone, PartialEq)]
pub struct FittedModel {
    variables: Vec<ModelVariable>,
    coefficients: Vec<f64>,
    covariance: Vec<Vec<f64>>,
    training: TrainingInfo,
}

/// Wald summary of one coefficient.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TermStats {
    pub coefficient: f64,
    pub standard_error: f64,
    pub odds_ratio: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub p_value: f64,
}

impl TermStats {
    pub fn from_estimate(coefficient: f64, standard_error: f64) -> Self {
        let z = coefficient / standard_error;
        Self {
            coefficient,
            standard_error,
            odds_ratio: coefficient.exp(),
            ci_low: (coefficient - Z_95 * standard_error).exp(),
            ci_high: (coefficient + Z_95 * standard_error).exp(),
            p_value: normal_two_sided_p(z),
        }
    }

    pub fn z(&self) -> f64 {
        self.coefficient / self.standard_error
    }

    fn consistent_with(&self, other: &TermStats) -> bool {
        let close = |a: f64, b: f64| (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1e-300);
        close(self.odds_ratio, other.odds_ratio)
            && close(self.ci_low, other.ci_low)
            && close(self.ci_high, other.ci_high)
            && (self.p_value - other.p_value).abs() <= 1e-9
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelTerm {
    pub name: String,
    #[serde(default)]
    pub keywords: Vec<String>,
    #[serde(flatten)]
    pub stats: TermStats,
}

impl FittedModel {
    pub fn new(
        variables: Vec<ModelVariable>,
        coefficients: Vec<f64>,
        covariance: Vec<Vec<f64>>,
        training: TrainingInfo,
    ) -> Result<Self, LogitError> {
        let k = variables.len() + 1;
        let invalid = |msg: String| Err(LogitError::InvalidModel(msg));
        if coefficients.len() != k {
            return invalid(format!("{} coefficients for {k} terms", coefficients.len()));
        }
        if covariance.len() != k || covariance.iter().any(|r| r.len() != k) {
            return invalid(format!("covariance must be {k}x{k}"));
        }
        if coefficients.iter().any(|b| !b.is_finite()) {
            return invalid("non-finite coefficient".into());
        }
        for (i, row) in covariance.iter().enumerate() {
            if !(row[i].is_finite() && row[i] > 0.0) {
                return invalid(format!("covariance diagonal {i} is not positive"));
            }
            for (j, &a) in row.iter().enumerate().take(i) {
                let b = covariance[j][i];
                if (a - b).abs() > 1e-12 * a.abs().max(b.abs()).max(1.0) {
                    return invalid("covariance is not symmetric".into());
                }
            }
        }
        Ok(Self {
            variables,
            coefficients,
            covariance,
            training,
        })
    }

    pub fn variables(&self) -> &[ModelVariable] {
        &self.variables
    }

    pub fn variable_names(&self) -> impl Iterator<Item = &str> {
        self.variables.iter().map(|v| v.name.as_str())
    }

    pub fn n_vars(&self) -> usize {
        self.variables.len()
    }

    /// Number of estimated coefficients including the intercept.
    pub fn n_params(&self) -> usize {
        self.coefficients.len()
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn covariance(&self) -> &[Vec<f64>] {
        &self.covariance
    }

    pub fn training(&self) -> &TrainingInfo {
        &self.training
    }

    pub fn training_mut(&mut self) -> &mut TrainingInfo {
        &mut self.training
    }

    pub fn intercept(&self) -> f64 {
        self.coefficients[0]
    }

    /// Coefficient of term `j` (0 = intercept).
    pub fn coefficient(&self, j: usize) -> f64 {
        self.coefficients[j]
    }

    pub fn standard_error(&self, j: usize) -> f64 {
        self.covariance[j][j].sqrt()
    }

    pub fn odds_ratio(&self, j: usize) -> f64 {
        self.coefficients[j].exp()
    }

    pub fn stats(&self, j: usize) -> TermStats {
        TermStats::from_estimate(self.coefficient(j), self.standard_error(j))
    }

    pub fn term_name(&self, j: usize) -> &str {
        if j == 0 {
            INTERCEPT
        } else {
            &self.variables[j - 1].name
        }
    }

    pub fn log_likelihood(&self) -> Option<f64> {
        self.training.log_likelihood
    }

    /// `2k − 2·lnL`; unknown for models without a likelihood.
    pub fn aic(&self) -> Option<f64> {
        self.training
            .log_likelihood
            .map(|ll| 2.0 * self.n_params() as f64 - 2.0 * ll)
    }

    pub fn n_obs(&self) -> usize {
        self.training.n_obs
    }

    /// Grouping rebuilt from the keywords stored alongside each variable.
    pub fn grouping(&self) -> Vec<Variable> {
        self.variables
            .iter()
            .map(|v| Variable {
                name: v.name.clone(),
                keywords: v.keywords.clone(),
            })
            .collect()
    }

    /// Attaches keyword lists from a grouping to variables with matching names.
    pub fn attach_keywords(&mut self, grouping: &VariableGrouping) {
        for var in &mut self.variables {
            if let Some(g) = grouping.variables().iter().find(|g| g.name == var.name) {
                var.keywords = g.keywords.clone();
            }
        }
    }

    fn check_arity(&self, bits: &[bool]) -> Result<(), LogitError> {
        if bits.len() != self.n_vars() {
            return Err(LogitError::ArityMismatch {
                expected: self.n_vars(),
                actual: bits.len(),
            });
        }
        Ok(())
    }

    /// Per-variable contributions β_v·bit_v.
    pub fn contributions(&self, bits: &[bool]) -> Result<Vec<f64>, LogitError> {
        self.check_arity(bits)?;
        Ok(bits
            .iter()
            .zip(&self.coefficients[1..])
            .map(|(&b, &beta)| if b { beta } else { 0.0 })
            .collect())
    }

    pub fn linear_score(&self, bits: &[bool]) -> Result<f64, LogitError> {
        Ok(self.intercept() + self.contributions(bits)?.iter().sum::<f64>())
    }

    pub fn predict_bits(&self, bits: &[bool]) -> Result<f64, LogitError> {
        self.linear_score(bits).map(logistic)
    }

    pub fn predict(&self, features: &FeatureVector) -> Result<f64, LogitError> {
        self.predict_bits(&features.bits)
    }

    pub fn to_file(&self) -> ModelFile {
        let intercept = self.stats(0);
        let variables = self
            .variables
            .iter()
            .enumerate()
            .map(|(i, v)| ModelTerm {
                name: v.name.clone(),
                keywords: v.keywords.clone(),
                stats: self.stats(i + 1),
            })
            .collect();
        ModelFile {
            format_version: MODEL_FORMAT_VERSION,
            intercept,
            variables,
            covariance: self.covariance.clone(),
            training: TrainingRecord {
                n_obs: self.training.n_obs,
                log_likelihood: self.training.log_likelihood,
                aic: self.aic(),
                converged: self.training.converged,
                iterations: self.training.iterations,
                seed: self.training.seed,
                rng: self.training.rng.clone(),
                timestamp: self.training.timestamp.clone(),
            },
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_file()).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, LogitError> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| LogitError::InvalidModel(e.to_string()))?;
        file.into_model()
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LogitError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| LogitError::InvalidModel(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

/// `predict` as a free function over a model and a feature vector.
pub fn predict(model: &FittedModel, features: &FeatureVector) -> Result<f64, LogitError> {
    model.predict(features)
}

/// Serialized model: per-term Wald statistics, covariance and training record.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub format_version: u32,
    pub intercept: TermStats,
    pub variables: Vec<ModelTerm>,
    pub covariance: Vec<Vec<f64>>,
    pub training: TrainingRecord,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainingRecord {
    pub n_obs: usize,
    pub log_likelihood: Option<f64>,
    pub aic: Option<f64>,
    #[serde(default)]
    pub converged: bool,
    #[serde(default)]
    pub iterations: usize,
    pub seed: Option<u64>,
    #[serde(default)]
    pub rng: Option<String>,
    pub timestamp: Option<String>,
}

impl ModelFile {
    /// Rebuilds the model, rejecting files whose derived columns disagree
    /// with their coefficients and covariance.
    pub fn into_model(self) -> Result<FittedModel, LogitError> {
        if self.format_version != MODEL_FORMAT_VERSION {
            return Err(LogitError::InvalidModel(format!(
                "unsupported format_version {}",
                self.format_version
            )));
        }
        let mut coefficients = vec![self.intercept.coefficient];
        coefficients.extend(self.variables.iter().map(|v| v.stats.coefficient));
        let variables = self
            .variables
            .iter()
            .map(|v| ModelVariable {
                name: v.name.clone(),
                keywords: v.keywords.clone(),
            })
            .collect();
        let model = FittedModel::new(
            variables,
            coefficients,
            self.covariance,
            TrainingInfo {
                n_obs: self.training.n_obs,
                log_likelihood: self.training.log_likelihood,
                converged: self.training.converged,
                iterations: self.training.iterations,
                seed: self.training.seed,
                rng: self.training.rng,
                timestamp: self.training.timestamp,
            },
        )?;

        let stored = std::iter::once((INTERCEPT, &self.intercept))
            .chain(self.variables.iter().map(|v| (v.name.as_str(), &v.stats)));
        for (j, (name, stats)) in stored.enumerate() {
            let se = model.standard_error(j);
            if (se - stats.standard_error).abs() > 1e-9 * se.max(1.0) {
                return Err(LogitError::InvalidModel(format!(
                    "{name}: standard_error disagrees with covariance"
                )));
            }
            if !stats.consistent_with(&model.stats(j)) {
                return Err(LogitError::InvalidModel(format!(
                    "{name}: odds ratio, interval or p-value inconsistent with coefficient"
                )));
            }
        }
        match (model.aic(), self.training.aic) {
            (Some(a), Some(b)) if (a - b).abs() <= 1e-9 * a.abs().max(1.0) => {}
            (None, None) => {}
            _ => return Err(LogitError::InvalidModel("aic disagrees with log_likelihood".into())),
        }
        Ok(model)
    }
}
