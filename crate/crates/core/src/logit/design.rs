use super::LogitError;
use crate::text::FeatureVector;

/// Binary design: `n` observations over `p` named indicator columns.
#[derive(Debug, Clone, PartialEq)]
pub struct DesignMatrix {
    names: Vec<String>,
    rows: Vec<Vec<bool>>,
    outcome: Vec<bool>,
}

impl DesignMatrix {
    pub fn new(
        names: Vec<String>,
        rows: Vec<Vec<bool>>,
        outcome: Vec<bool>,
    ) -> Result<Self, LogitError> {
        if rows.len() != outcome.len() {
            return Err(LogitError::OutcomeLength {
                rows: rows.len(),
                labels: outcome.len(),
            });
        }
        if let Some(row) = rows.iter().find(|r| r.len() != names.len()) {
            return Err(LogitError::ArityMismatch {
                expected: names.len(),
                actual: row.len(),
            });
        }
        Ok(Self {
            names,
            rows,
            outcome,
        })
    }

    pub fn from_features(
        names: Vec<String>,
        features: &[FeatureVector],
        outcome: Vec<bool>,
    ) -> Result<Self, LogitError> {
        let rows = features.iter().map(|f| f.bits.clone()).collect();
        Self::new(names, rows, outcome)
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_columns(&self, columns: &[usize]) -> Self {
        Self {
            names: columns.iter().map(|&j| self.names[j].clone()).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| columns.iter().map(|&j| r[j]).collect())
                .collect(),
            outcome: self.outcome.clone(),
        }
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn rows(&self) -> &[Vec<bool>] {
        &self.rows
    }

    pub fn outcome(&self) -> &[bool] {
        &self.outcome
    }

    pub fn n_obs(&self) -> usize {
        self.rows.len()
    }

    pub fn n_vars(&self) -> usize {
        self.names.len()
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = bool> + '_ {
        self.rows.iter().map(move |r| r[j])
    }

    /// First column whose value never varies, if any.
    pub fn constant_column(&self) -> Option<usize> {
        (0..self.n_vars()).find(|&j| {
            let ones = self.column(j).filter(|&b| b).count();
            ones == 0 || ones == self.n_obs()
        })
    }
}
