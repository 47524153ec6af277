use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::design::DesignMatrix;
use super::likelihood::LogLikelihood;
use super::model::{FittedModel, ModelVariable, TrainingInfo};
use super::{LogitError, INTERCEPT};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitConfig {
    /// Convergence threshold on the largest absolute score component.
    pub tol: f64,
    pub max_iter: usize,
    /// Any |β| above this during iteration is reported as separation.
    pub separation_bound: f64,
}

impl Default for FitConfig {
    fn default() -> Self {
        Self {
            tol: 1e-8,
            max_iter: 50,
            separation_bound: 15.0,
        }
    }
}

const MAX_HALVINGS: usize = 60;
// Pivot ratio below which the information matrix is treated as rank deficient.
const SINGULAR_RATIO: f64 = 1e-13;

/// Maximum-likelihood fit by Newton–Raphson with step-halving.
///
/// On success the largest score component is below `config.tol` and the
/// covariance is the inverse observed information at the optimum.
pub fn fit_logistic(design: &DesignMatrix, config: &FitConfig) -> Result<FittedModel, LogitError> {
    let k = design.n_vars() + 1;
    let n = design.n_obs();
    if n < k {
        return Err(LogitError::TooFewObservations { n, k });
    }
    if let Some(j) = design.constant_column() {
        return Err(LogitError::Degenerate(design.names()[j].clone()));
    }
    let positives = design.outcome().iter().filter(|&&y| y).count();
    if positives == 0 || positives == n {
        return Err(LogitError::ConstantOutcome);
    }

    let objective = LogLikelihood::new(design);
    let mut beta = vec![0.0; k];
    let mut ll = objective.value(&beta);
    let mut grad = objective.gradient(&beta);
    let mut iterations = 0;

    loop {
        let max_grad = grad.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        if max_grad < config.tol {
            break;
        }
        if iterations == config.max_iter {
            return Err(LogitError::Separation(diverging(design, &beta, config)));
        }
        iterations += 1;

        let chol = factor(&objective.information(&beta))?;
        let step = chol.solve(&DVector::from_vec(grad.clone()));

        // Accept the first trial whose likelihood does not drop (up to rounding).
        let slack = 1e-12 * ll.abs().max(1.0);
        let mut scale = 1.0;
        let mut candidate: Vec<f64>;
        let mut candidate_ll;
        let mut halvings = 0;
        loop {
            candidate = beta.iter().zip(step.iter()).map(|(b, s)| b + scale * s).collect();
            candidate_ll = objective.value(&candidate);
            if candidate_ll >= ll - slack || halvings == MAX_HALVINGS {
                break;
            }
            scale *= 0.5;
            halvings += 1;
        }
        beta = candidate;
        ll = candidate_ll;
        if beta.iter().any(|b| b.abs() > config.separation_bound) {
            return Err(LogitError::Separation(diverging(design, &beta, config)));
        }
        grad = objective.gradient(&beta);
    }

    let chol = factor(&objective.information(&beta))?;
    let inv = chol.inverse();
    let covariance = (0..k)
        .map(|i| (0..k).map(|j| 0.5 * (inv[(i, j)] + inv[(j, i)])).collect())
        .collect();

    let variables = design
        .names()
        .iter()
        .map(|name| ModelVariable {
            name: name.clone(),
            keywords: Vec::new(),
        })
        .collect();
    FittedModel::new(
        variables,
        beta,
        covariance,
        TrainingInfo {
            n_obs: n,
            log_likelihood: Some(ll),
            converged: true,
            iterations,
            ..TrainingInfo::default()
        },
    )
}

fn factor(info: &[Vec<f64>]) -> Result<nalgebra::Cholesky<f64, nalgebra::Dyn>, LogitError> {
    let k = info.len();
    let m = DMatrix::from_fn(k, k, |i, j| info[i][j]);
    if m.iter().any(|v| !v.is_finite()) {
        return Err(LogitError::Singular);
    }
    let chol = m.cholesky().ok_or(LogitError::Singular)?;
    let l = chol.l_dirty();
    let (lo, hi) = (0..k).fold((f64::INFINITY, 0.0f64), |(lo, hi), i| {
        let d = l[(i, i)] * l[(i, i)];
        (lo.min(d), hi.max(d))
    });
    // Also rejects NaN pivots.
    if lo.partial_cmp(&(SINGULAR_RATIO * hi)) != Some(std::cmp::Ordering::Greater) {
        return Err(LogitError::Singular);
    }
    Ok(chol)
}

/// Names of the terms whose coefficients are running away, largest first.
fn diverging(design: &DesignMatrix, beta: &[f64], config: &FitConfig) -> Vec<String> {
    let name = |j: usize| {
        if j == 0 {
            INTERCEPT.to_string()
        } else {
            design.names()[j - 1].clone()
        }
    };
    let mut over: Vec<usize> = (1..beta.len())
        .filter(|&j| beta[j].abs() > config.separation_bound)
        .collect();
    if over.is_empty() {
        // Hit max_iter without crossing the bound: report the largest slopes.
        let largest = (1..beta.len()).map(|j| beta[j].abs()).fold(0.0f64, f64::max);
        over = (1..beta.len())
            .filter(|&j| largest > 0.0 && beta[j].abs() >= 0.5 * largest)
            .collect();
    }
    if over.is_empty() {
        return vec![name(0)];
    }
    over.sort_by(|&a, &b| beta[b].abs().total_cmp(&beta[a].abs()));
    over.into_iter().map(name).collect()
}
