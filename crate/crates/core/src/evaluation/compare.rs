use serde::{Deserialize, Serialize};

use super::{EvalError, RocCurve};
use crate::logit::FittedModel;

#[derive(Debug, Clone, Copy)]
pub struct ModelCandidate<'a> {
    pub name: &'a str,
    pub model: &'a FittedModel,
    pub roc: &'a RocCurve,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedModel {
    pub name: String,
    pub auc: f64,
    pub aic: f64,
    pub n_params: usize,
    /// 1-based position when ordered by AUC alone (ties share the better rank).
    pub auc_rank: usize,
    /// 1-based position when ordered by AIC alone.
    pub aic_rank: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelRanking {
    /// Candidates ordered by higher AUC, then lower AIC; input order breaks ties.
    pub ranked: Vec<RankedModel>,
    pub selected: String,
    /// The selected model does not also have the lowest AIC.
    pub conflict: bool,
}

/// Ranks fitted models by (largest AUC, lowest AIC).
pub fn aic_compare(candidates: &[ModelCandidate<'_>]) -> Result<ModelRanking, EvalError> {
    let first = candidates.first().ok_or(EvalError::NoModels)?;
    let mut entries = Vec::with_capacity(candidates.len());
    for c in candidates {
        if c.model.n_obs() != first.model.n_obs() {
            return Err(EvalError::Incomparable {
                first: first.model.n_obs(),
                second: c.model.n_obs(),
            });
        }
        let aic = c
            .model
            .aic()
            .ok_or_else(|| EvalError::MissingLikelihood(c.name.to_string()))?;
        entries.push(RankedModel {
            name: c.name.to_string(),
            auc: c.roc.auc,
            aic,
            n_params: c.model.n_params(),
            auc_rank: 0,
            aic_rank: 0,
        });
    }
    let snapshot = entries.clone();
    for e in &mut entries {
        e.auc_rank = 1 + snapshot.iter().filter(|o| o.auc > e.auc).count();
        e.aic_rank = 1 + snapshot.iter().filter(|o| o.aic < e.aic).count();
    }
    entries.sort_by(|a, b| b.auc.total_cmp(&a.auc).then(a.aic.total_cmp(&b.aic)));
    let conflict = entries[0].aic_rank != 1;
    Ok(ModelRanking {
        selected: entries[0].name.clone(),
        ranked: entries,
        conflict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logit::{ModelVariable, TrainingInfo};

    fn model(n_obs: usize, k: usize, aic: f64) -> FittedModel {
        let variables = (1..k)
            .map(|i| ModelVariable { name: format!("v{i}"), keywords: vec![] })
            .collect();
        let ll = (2.0 * k as f64 - aic) / 2.0;
        FittedModel::new(
            variables,
            vec![0.0; k],
            (0..k).map(|i| (0..k).map(|j| if i == j { 1.0 } else { 0.0 }).collect()).collect(),
            TrainingInfo { n_obs, log_likelihood: Some(ll), ..Default::default() },
        )
        .unwrap()
    }

    fn roc(auc: f64) -> RocCurve {
        RocCurve {
            points: vec![],
            auc,
            auc_se: 0.0,
            auc_ci_low: auc,
            auc_ci_high: auc,
            n_pos: 1,
            n_neg: 1,
        }
    }

    #[test]
    fn auc_first_with_conflict_flag() {
        let (ma, mb) = (model(100, 3, 600.0), model(100, 2, 590.0));
        let (ra, rb) = (roc(0.89), roc(0.85));
        let r = aic_compare(&[
            ModelCandidate { name: "B", model: &mb, roc: &rb },
            ModelCandidate { name: "A", model: &ma, roc: &ra },
        ])
        .unwrap();
        assert_eq!(r.selected, "A");
        assert!(r.conflict);
        assert!((r.ranked[0].aic - 600.0).abs() < 1e-9);
        assert_eq!((r.ranked[0].auc_rank, r.ranked[0].aic_rank), (1, 2));
    }

    #[test]
    fn identical_models_keep_input_order() {
        let m = model(50, 2, 70.0);
        let rc = roc(0.7);
        let r = aic_compare(&[
            ModelCandidate { name: "first", model: &m, roc: &rc },
            ModelCandidate { name: "second", model: &m, roc: &rc },
        ])
        .unwrap();
        assert_eq!(r.selected, "first");
        assert_eq!(r.ranked[1].name, "second");
        assert!(!r.conflict);
    }

    #[test]
    fn auc_tie_broken_by_aic() {
        let (ma, mb) = (model(50, 2, 80.0), model(50, 3, 75.0));
        let rc = roc(0.7);
        let r = aic_compare(&[
            ModelCandidate { name: "a", model: &ma, roc: &rc },
            ModelCandidate { name: "b", model: &mb, roc: &rc },
        ])
        .unwrap();
        assert_eq!(r.selected, "b");
    }

    #[test]
    fn different_samples_are_incomparable() {
        let (ma, mb) = (model(50, 2, 80.0), model(51, 2, 80.0));
        let rc = roc(0.7);
        assert_eq!(
            aic_compare(&[
                ModelCandidate { name: "a", model: &ma, roc: &rc },
                ModelCandidate { name: "b", model: &mb, roc: &rc },
            ]),
            Err(EvalError::Incomparable { first: 50, second: 51 })
        );
        assert_eq!(aic_compare(&[]), Err(EvalError::NoModels));
    }
}
