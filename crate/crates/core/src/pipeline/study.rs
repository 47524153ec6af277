//! End-to-end study: features → split → univariate screen → selection →
//! multivariate fit → ROC on both groups → validation calibration.

use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::dataset::{Dataset, Summary};
use super::score::{ScoreError, Scorer};
use super::selection::{SelectionContext, SelectionRegistry};
use super::split::{split, SplitError, SPLIT_RNG};
use crate::evaluation::{
    aic_compare, calibration_strata, roc_auc, CalibrationConfig, CalibrationReport, EvalError,
    ModelCandidate, ModelRanking, RocCurve,
};
use crate::logit::{
    fit_logistic, univariate_screen, DesignMatrix, FitConfig, FittedModel, LogitError, ModelFile,
    UnivariateResult,
};
use crate::text::{extract, Lexicon, VariableGrouping};

pub const REPORT_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Error)]
pub enum StudyError {
    #[error("unknown selection strategy {0:?}")]
    UnknownSelection(String),
    #[error("forced variable {0:?} is not in the grouping")]
    UnknownVariable(String),
    #[error("a seed is required to recover the {0} group for this model")]
    MissingSeed(&'static str),
    #[error(transparent)]
    Split(#[from] SplitError),
    #[error(transparent)]
    Score(#[from] ScoreError),
    #[error("{stage}: {source}")]
    Fit {
        stage: &'static str,
        #[source]
        source: LogitError,
    },
    #[error("{stage}: {source}")]
    Eval {
        stage: &'static str,
        #[source]
        source: EvalError,
    },
}

impl StudyError {
    /// Failure of the statistics (separation, singular design, one-class
    /// group) rather than of the inputs.
    pub fn is_statistical(&self) -> bool {
        matches!(self, StudyError::Fit { .. } | StudyError::Eval { .. })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyConfig {
    pub seed: u64,
    /// Name of a registered selection strategy.
    pub selection: String,
    /// Variables kept regardless of significance; `None` keeps every grouping variable.
    pub forced_variables: Option<Vec<String>>,
    pub alpha: f64,
    pub fit: FitConfig,
    pub calibration: CalibrationConfig,
}

impl Default for StudyConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            selection: "forced".into(),
            forced_variables: None,
            alpha: 0.05,
            fit: FitConfig::default(),
            calibration: CalibrationConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Group {
    Generation,
    Validation,
    All,
}

impl Group {
    pub fn as_str(self) -> &'static str {
        match self {
            Group::Generation => "generation",
            Group::Validation => "validation",
            Group::All => "all",
        }
    }
}

impl FromStr for Group {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "generation" => Ok(Group::Generation),
            "validation" => Ok(Group::Validation),
            "all" => Ok(Group::All),
            other => Err(format!("unknown group {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupEvaluation {
    pub n_obs: usize,
    pub n_positive: usize,
    pub prevalence: f64,
    pub roc: RocCurve,
}

/// Per-record prediction shipped with every report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecordOutput {
    pub id: String,
    pub group: Group,
    pub label: u8,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SplitSizes {
    pub n_generation: usize,
    pub n_validation: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SelectionOutcome {
    pub strategy: String,
    pub alpha: f64,
    pub forced: Vec<String>,
    pub selected: Vec<String>,
}

/// One model considered in the AUC/AIC comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub name: String,
    pub variables: Vec<String>,
    pub auc: Option<f64>,
    pub aic: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub candidates: Vec<Candidate>,
    pub ranking: Option<ModelRanking>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StudyReport {
    pub format_version: u32,
    pub seed: u64,
    pub rng: String,
    pub config: StudyConfig,
    pub lexicon_version: String,
    pub dataset: Summary,
    pub split: SplitSizes,
    pub univariate: Vec<UnivariateResult>,
    pub selection: SelectionOutcome,
    pub model: ModelFile,
    pub comparison: Comparison,
    pub generation: GroupEvaluation,
    pub validation: GroupEvaluation,
    pub calibration: CalibrationReport,
    pub records: Vec<RecordOutput>,
}

impl StudyReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

#[derive(Debug, Clone)]
pub struct StudyOutcome {
    pub model: FittedModel,
    pub report: StudyReport,
}

/// Runs the study with the default selection strategies.
pub fn run_study(
    dataset: &Dataset,
    lexicon: &Lexicon,
    grouping: &VariableGrouping,
    config: &StudyConfig,
) -> Result<StudyOutcome, StudyError> {
    run_study_with(dataset, lexicon, grouping, config, &SelectionRegistry::with_defaults())
}

struct Row {
    id: String,
    label: bool,
    bits: Vec<bool>,
    group: Group,
}

pub fn run_study_with(
    dataset: &Dataset,
    lexicon: &Lexicon,
    grouping: &VariableGrouping,
    config: &StudyConfig,
    registry: &SelectionRegistry,
) -> Result<StudyOutcome, StudyError> {
    let strategy = registry
        .get(&config.selection)
        .ok_or_else(|| StudyError::UnknownSelection(config.selection.clone()))?;
    let forced: Vec<String> = match &config.forced_variables {
        None => grouping.names().map(str::to_string).collect(),
        Some(list) => {
            if let Some(bad) = list.iter().find(|v| grouping.position(v).is_none()) {
                return Err(StudyError::UnknownVariable(bad.clone()));
            }
            list.clone()
        }
    };

    let plan = split(dataset, config.seed)?;
    let generation = plan.generation_set();
    let rows: Vec<Row> = dataset
        .labeled()
        .map(|(record, label)| Row {
            id: record.id.clone(),
            label,
            bits: extract(record, lexicon, grouping).bits,
            group: if generation.contains(record.id.as_str()) {
                Group::Generation
            } else {
                Group::Validation
            },
        })
        .collect();

    let names: Vec<String> = grouping.names().map(str::to_string).collect();
    let gen_rows: Vec<&Row> = rows.iter().filter(|r| r.group == Group::Generation).collect();
    let gen_design = DesignMatrix::new(
        names.clone(),
        gen_rows.iter().map(|r| r.bits.clone()).collect(),
        gen_rows.iter().map(|r| r.label).collect(),
    )
    .map_err(|source| StudyError::Fit { stage: "generation design", source })?;

    let screen = univariate_screen(&gen_design, &config.fit);
    let ctx = SelectionContext {
        screen: &screen,
        alpha: config.alpha,
        forced: &forced,
    };
    let selected = strategy.select(&ctx);

    let mut model = fit_logistic(&gen_design.select_columns(&selected), &config.fit)
        .map_err(|source| StudyError::Fit { stage: "multivariate fit", source })?;
    model.attach_keywords(grouping);
    {
        let training = model.training_mut();
        training.seed = Some(config.seed);
        training.rng = Some(SPLIT_RNG.to_string());
    }

    let predict = |m: &FittedModel, cols: &[usize], r: &Row| {
        let bits: Vec<bool> = cols.iter().map(|&j| r.bits[j]).collect();
        m.predict_bits(&bits).expect("columns match the fitted design")
    };
    let probabilities: Vec<f64> = rows.iter().map(|r| predict(&model, &selected, r)).collect();

    let evaluate_group = |group: Group, stage: &'static str| -> Result<GroupEvaluation, StudyError> {
        let (scores, labels): (Vec<f64>, Vec<bool>) = rows
            .iter()
            .zip(&probabilities)
            .filter(|(r, _)| r.group == group)
            .map(|(r, &p)| (p, r.label))
            .unzip();
        let roc = roc_auc(&scores, &labels).map_err(|source| StudyError::Eval { stage, source })?;
        let n_positive = labels.iter().filter(|&&y| y).count();
        Ok(GroupEvaluation {
            n_obs: labels.len(),
            n_positive,
            prevalence: n_positive as f64 / labels.len() as f64,
            roc,
        })
    };
    let generation_eval = evaluate_group(Group::Generation, "generation ROC")?;
    let validation_eval = evaluate_group(Group::Validation, "validation ROC")?;

    let (val_p, val_y): (Vec<f64>, Vec<bool>) = rows
        .iter()
        .zip(&probabilities)
        .filter(|(r, _)| r.group == Group::Validation)
        .map(|(r, &p)| (p, r.label))
        .unzip();
    let calibration = calibration_strata(&val_p, &val_y, &config.calibration)
        .map_err(|source| StudyError::Eval { stage: "validation calibration", source })?;

    // Candidate models for the AUC/AIC comparison, all on the generation group.
    let mut specs: Vec<(String, Vec<usize>)> = vec![("null".into(), Vec::new())];
    specs.extend(registry.iter().map(|s| (s.name().to_string(), s.select(&ctx))));
    let mut candidates = Vec::new();
    let mut fitted: Vec<(String, FittedModel, RocCurve)> = Vec::new();
    for (name, cols) in specs {
        let variables = cols.iter().map(|&j| names[j].clone()).collect();
        let result = if name == strategy.name() {
            Ok(model.clone())
        } else {
            fit_logistic(&gen_design.select_columns(&cols), &config.fit)
        };
        let outcome = result.map_err(|e| e.to_string()).and_then(|m| {
            let scores: Vec<f64> = gen_rows.iter().map(|r| predict(&m, &cols, r)).collect();
            let labels: Vec<bool> = gen_rows.iter().map(|r| r.label).collect();
            let roc = roc_auc(&scores, &labels).map_err(|e| e.to_string())?;
            Ok((m, roc))
        });
        match outcome {
            Ok((m, roc)) => {
                candidates.push(Candidate {
                    name: name.clone(),
                    variables,
                    auc: Some(roc.auc),
                    aic: m.aic(),
                    error: None,
                });
                fitted.push((name, m, roc));
            }
            Err(error) => candidates.push(Candidate {
                name,
                variables,
                auc: None,
                aic: None,
                error: Some(error),
            }),
        }
    }
    let pool: Vec<ModelCandidate<'_>> = fitted
        .iter()
        .map(|(name, model, roc)| ModelCandidate { name, model, roc })
        .collect();
    let ranking = aic_compare(&pool).ok();

    let records = rows
        .iter()
        .zip(&probabilities)
        .map(|(r, &p)| RecordOutput {
            id: r.id.clone(),
            group: r.group,
            label: u8::from(r.label),
            probability: p,
        })
        .collect();

    let report = StudyReport {
        format_version: REPORT_FORMAT_VERSION,
        seed: config.seed,
        rng: SPLIT_RNG.to_string(),
        config: config.clone(),
        lexicon_version: lexicon.version().to_string(),
        dataset: dataset.summary.clone(),
        split: SplitSizes {
            n_generation: plan.generation_ids.len(),
            n_validation: plan.validation_ids.len(),
        },
        univariate: screen.clone(),
        selection: SelectionOutcome {
            strategy: strategy.name().to_string(),
            alpha: config.alpha,
            forced,
            selected: selected.iter().map(|&j| names[j].clone()).collect(),
        },
        model: model.to_file(),
        comparison: Comparison { candidates, ranking },
        generation: generation_eval,
        validation: validation_eval,
        calibration,
        records,
    };
    Ok(StudyOutcome { model, report })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub group: Group,
    pub seed: Option<u64>,
    pub evaluation: GroupEvaluation,
    pub calibration: CalibrationReport,
    pub records: Vec<RecordOutput>,
}

/// Scores one group of a labeled dataset with a saved model. The split is
/// recomputed from `seed`, falling back to the seed stored in the model.
pub fn evaluate_model(
    model: FittedModel,
    dataset: &Dataset,
    group: Group,
    seed: Option<u64>,
    calibration: &CalibrationConfig,
) -> Result<EvaluationReport, StudyError> {
    let seed = seed.or(model.training().seed);
    let members = match (group, seed) {
        (Group::All, _) => None,
        (_, None) => return Err(StudyError::MissingSeed(group.as_str())),
        (_, Some(seed)) => {
            let plan = split(dataset, seed)?;
            Some(match group {
                Group::Generation => plan.generation_ids,
                _ => plan.validation_ids,
            })
        }
    };
    let members: Option<std::collections::HashSet<String>> = members.map(|m| m.into_iter().collect());
    let scorer = Scorer::new(model)?;

    let mut records = Vec::new();
    for (record, label) in dataset.labeled() {
        if members.as_ref().is_some_and(|m| !m.contains(&record.id)) {
            continue;
        }
        records.push(RecordOutput {
            id: record.id.clone(),
            group,
            label: u8::from(label),
            probability: scorer.score(record).probability,
        });
    }
    let scores: Vec<f64> = records.iter().map(|r| r.probability).collect();
    let labels: Vec<bool> = records.iter().map(|r| r.label == 1).collect();
    let roc = roc_auc(&scores, &labels)
        .map_err(|source| StudyError::Eval { stage: "ROC", source })?;
    let calibration = calibration_strata(&scores, &labels, calibration)
        .map_err(|source| StudyError::Eval { stage: "calibration", source })?;
    let n_positive = labels.iter().filter(|&&y| y).count();
    Ok(EvaluationReport {
        group,
        seed,
        evaluation: GroupEvaluation {
            n_obs: labels.len(),
            n_positive,
            prevalence: n_positive as f64 / labels.len() as f64,
            roc,
        },
        calibration,
        records,
    })
}
