use serde::{Deserialize, Serialize};

use super::{check_lengths, EvalError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CalibrationConfig {
    pub n_strata: usize,
    /// Strata with fewer positive labels are merged into a neighbour.
    pub min_positives: usize,
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        Self {
            n_strata: 4,
            min_positives: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stratum {
    /// "Q3", or "Q1-Q2" after merging.
    pub label: String,
    /// 1-based nominal quantile indices folded into this stratum.
    pub quantiles: Vec<usize>,
    pub n_obs: usize,
    pub n_positive: usize,
    pub observed_rate: f64,
    pub mean_predicted: f64,
    pub min_predicted: f64,
    pub max_predicted: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationReport {
    pub strata: Vec<Stratum>,
    pub merged: bool,
    pub n_obs: usize,
    pub n_positive: usize,
    pub prevalence: f64,
}

struct Acc {
    quantiles: Vec<usize>,
    n_obs: usize,
    n_positive: usize,
    sum_predicted: f64,
    min_predicted: f64,
    max_predicted: f64,
}

impl Acc {
    fn absorb(&mut self, other: Acc) {
        self.quantiles.extend(other.quantiles);
        self.quantiles.sort_unstable();
        self.n_obs += other.n_obs;
        self.n_positive += other.n_positive;
        self.sum_predicted += other.sum_predicted;
        self.min_predicted = self.min_predicted.min(other.min_predicted);
        self.max_predicted = self.max_predicted.max(other.max_predicted);
    }

    fn finish(self) -> Stratum {
        let label = match (self.quantiles.first(), self.quantiles.last()) {
            (Some(a), Some(b)) if a != b => format!("Q{a}-Q{b}"),
            (Some(a), _) => format!("Q{a}"),
            _ => String::new(),
        };
        Stratum {
            label,
            observed_rate: self.n_positive as f64 / self.n_obs as f64,
            mean_predicted: self.sum_predicted / self.n_obs as f64,
            quantiles: self.quantiles,
            n_obs: self.n_obs,
            n_positive: self.n_positive,
            min_predicted: self.min_predicted,
            max_predicted: self.max_predicted,
        }
    }
}

/// Bins records by predicted-probability quantile and compares the mean
/// prediction with the observed event rate in each bin.
///
/// A run of identical predictions is kept whole and placed in the quantile of
/// its lowest rank. Strata with fewer than `min_positives` events are merged
/// into the next higher stratum (the previous one for the top stratum) until
/// every stratum qualifies or one remains.
pub fn calibration_strata(
    predicted: &[f64],
    labels: &[bool],
    config: &CalibrationConfig,
) -> Result<CalibrationReport, EvalError> {
    check_lengths(predicted.len(), labels.len())?;
    let n = predicted.len();
    let k = config.n_strata.max(1);
    if n < k {
        return Err(EvalError::TooFew { n, needed: k });
    }
    if let Some(&bad) = predicted.iter().find(|p| !(0.0..=1.0).contains(*p)) {
        return Err(EvalError::NotAProbability(bad));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| predicted[a].total_cmp(&predicted[b]));

    let mut strata: Vec<Acc> = Vec::new();
    let mut rank = 0;
    while rank < n {
        let q = rank * k / n;
        let value = predicted[order[rank]];
        if strata.last().is_none_or(|s| s.quantiles[0] != q + 1) {
            strata.push(Acc {
                quantiles: vec![q + 1],
                n_obs: 0,
                n_positive: 0,
                sum_predicted: 0.0,
                min_predicted: value,
                max_predicted: value,
            });
        }
        let acc = strata.last_mut().expect("pushed above");
        while rank < n && predicted[order[rank]] == value {
            acc.n_obs += 1;
            acc.n_positive += usize::from(labels[order[rank]]);
            acc.sum_predicted += value;
            rank += 1;
        }
        acc.max_predicted = value;
    }

    let mut merged = false;
    while strata.len() > 1 {
        let Some(i) = strata.iter().position(|s| s.n_positive < config.min_positives) else {
            break;
        };
        let j = if i + 1 < strata.len() { i + 1 } else { i - 1 };
        let (lo, hi) = (i.min(j), i.max(j));
        let upper = strata.remove(hi);
        strata[lo].absorb(upper);
        merged = true;
    }

    let n_positive = labels.iter().filter(|&&y| y).count();
    Ok(CalibrationReport {
        strata: strata.into_iter().map(Acc::finish).collect(),
        merged,
        n_obs: n,
        n_positive,
        prevalence: n_positive as f64 / n as f64,
    })
}
