use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::dataset::{parse_csv, parse_json, IngestError};
use crate::logit::{FittedModel, LogitError};
use crate::record::{AppRecord, Store};
use crate::text::{extract, Lexicon, LexiconError, VariableGrouping};

#[derive(Debug, Error)]
pub enum ScoreError {
    #[error("model variable {0:?} carries no keywords, so it cannot be matched in text")]
    NoKeywords(String),
    #[error(transparent)]
    Lexicon(#[from] LexiconError),
    #[error(transparent)]
    Logit(#[from] LogitError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Contribution {
    pub variable: String,
    /// β_v·bit_v on the logit scale.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoredRecord {
    pub id: String,
    pub probability: f64,
    pub logit: f64,
    pub intercept: f64,
    pub bits: Vec<u8>,
    pub matched_keywords: Vec<String>,
    pub contributions: Vec<Contribution>,
    pub flags: Vec<String>,
}

/// One line of scoring output: a scored record or the reason a record was rejected.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ScoreLine {
    Scored(ScoredRecord),
    Rejected { row: usize, error: String },
}

/// A model paired with the keyword lexicon its variables were built from.
#[derive(Debug, Clone)]
pub struct Scorer {
    model: FittedModel,
    lexicon: Lexicon,
    grouping: VariableGrouping,
}

impl Scorer {
    pub fn new(model: FittedModel) -> Result<Self, ScoreError> {
        if let Some(v) = model.variables().iter().find(|v| v.keywords.is_empty()) {
            return Err(ScoreError::NoKeywords(v.name.clone()));
        }
        let keywords: BTreeSet<&str> = model
            .variables()
            .iter()
            .flat_map(|v| v.keywords.iter().map(String::as_str))
            .collect();
        let lexicon = Lexicon::new("model", keywords)?;
        let grouping = VariableGrouping::new(model.grouping(), &lexicon)?;
        Ok(Self {
            model,
            lexicon,
            grouping,
        })
    }

    pub fn model(&self) -> &FittedModel {
        &self.model
    }

    pub fn grouping(&self) -> &VariableGrouping {
        &self.grouping
    }

    pub fn score(&self, record: &AppRecord) -> ScoredRecord {
        let features = extract(record, &self.lexicon, &self.grouping);
        let contributions = self
            .model
            .contributions(&features.bits)
            .expect("grouping is built from the model's variables");
        let logit = self.model.intercept() + contributions.iter().sum::<f64>();
        let mut flags = Vec::new();
        if record.has_no_text() {
            flags.push("no_text".to_string());
        }
        ScoredRecord {
            id: record.id.clone(),
            probability: crate::logit::logistic(logit),
            logit,
            intercept: self.model.intercept(),
            bits: features.bits.iter().map(|&b| u8::from(b)).collect(),
            matched_keywords: features.matched_keywords.into_iter().collect(),
            contributions: self
                .model
                .variable_names()
                .zip(contributions)
                .map(|(name, value)| Contribution {
                    variable: name.to_string(),
                    value,
                })
                .collect(),
            flags,
        }
    }

    /// Scores a parsed record stream, keeping input order and turning parse
    /// failures into rejected lines.
    pub fn score_all(&self, inputs: Vec<Result<AppRecord, IngestError>>) -> Vec<ScoreLine> {
        inputs
            .into_iter()
            .enumerate()
            .map(|(i, input)| match input {
                Ok(record) => ScoreLine::Scored(self.score(&record)),
                Err(e) => ScoreLine::Rejected {
                    row: match &e {
                        IngestError::Parse { row, .. } | IngestError::UnknownStore { row, .. } => *row,
                        _ => i + 1,
                    },
                    error: e.to_string(),
                },
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    Auto,
    Csv,
    Json,
    /// The whole input is one description.
    Text,
}

impl std::str::FromStr for InputFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "auto" => Ok(InputFormat::Auto),
            "csv" => Ok(InputFormat::Csv),
            "json" => Ok(InputFormat::Json),
            "text" => Ok(InputFormat::Text),
            other => Err(format!("unknown input format {other:?}")),
        }
    }
}

/// Parses scoring input. `Auto` picks JSON when the input opens with `[` or
/// `{`, CSV when the first line names both `id` and `description` columns,
/// and otherwise treats the input as a single pasted description.
pub fn read_score_input(
    bytes: &[u8],
    format: InputFormat,
) -> Result<Vec<Result<AppRecord, IngestError>>, IngestError> {
    let format = match format {
        InputFormat::Auto => detect(bytes),
        f => f,
    };
    match format {
        InputFormat::Csv => parse_csv(bytes),
        InputFormat::Json => parse_json(bytes),
        InputFormat::Text | InputFormat::Auto => {
            let text = std::str::from_utf8(bytes).map_err(|e| IngestError::Parse {
                row: 1,
                reason: format!("invalid UTF-8: {e}"),
            })?;
            Ok(vec![Ok(AppRecord::new("input", Store::Other, "", text.trim()))])
        }
    }
}

fn detect(bytes: &[u8]) -> InputFormat {
    match bytes.iter().find(|b| !b.is_ascii_whitespace()) {
        Some(b'[') | Some(b'{') => return InputFormat::Json,
        None => return InputFormat::Text,
        _ => {}
    }
    let first_line = bytes.split(|&b| b == b'\n').next().unwrap_or_default();
    let header = String::from_utf8_lossy(first_line).to_ascii_lowercase();
    let columns: Vec<&str> = header.split(',').map(|c| c.trim().trim_matches('"')).collect();
    if columns.contains(&"id") && columns.contains(&"description") {
        InputFormat::Csv
    } else {
        InputFormat::Text
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logit::paper_model;

    fn scorer() -> Scorer {
        Scorer::new(paper_model()).unwrap()
    }

    fn describe(text: &str) -> ScoredRecord {
        scorer().score(&AppRecord::new("x", Store::Ios, "", text))
    }

    fn active(s: &ScoredRecord) -> Vec<&str> {
        s.contributions
            .iter()
            .zip(&s.bits)
            .filter(|(_, &b)| b == 1)
            .map(|(c, _)| c.variable.as_str())
            .collect()
    }

    #[test]
    fn empty_description_scores_baseline() {
        let s = describe("");
        assert!((s.probability - 0.0546).abs() < 5e-4);
        assert_eq!(s.flags, ["no_text"]);
        assert!(s.matched_keywords.is_empty());
    }

    #[test]
    fn diary_quiz_tracking_example() {
        let s = describe("Track your treatment diary and take our quiz");
        assert_eq!(active(&s), ["Activity Tracking", "Quizzes", "Diary"]);
        let expected = -2.85 + 23.91f64.ln() + 14.53f64.ln() + 24.44f64.ln();
        assert!((s.logit - expected).abs() < 1e-12);
        assert!((s.logit - 6.197).abs() < 1e-3);
        assert!((s.probability - 0.99797).abs() < 1e-5);
    }

    #[test]
    fn multiplayer_example() {
        let s = describe("multiplayer team game");
        assert_eq!(active(&s), ["Game Labels", "Player Aspects"]);
        assert!((s.logit - -0.094).abs() < 1e-3);
        assert!((s.probability - 0.477).abs() < 1e-3);
        assert_eq!(s.matched_keywords, ["game", "multiplayer", "team"]);
    }

    #[test]
    fn contributions_decompose_logit() {
        let s = describe("Fun games, quests and a daily routine with statistics and progress");
        let total: f64 = s.intercept + s.contributions.iter().map(|c| c.value).sum::<f64>();
        assert!((total - s.logit).abs() < 1e-12);
        let back = (s.probability / (1.0 - s.probability)).ln();
        assert!((back - s.logit).abs() < 1e-12);
    }

    #[test]
    fn model_without_keywords_rejected() {
        let mut file = paper_model().to_file();
        file.variables[0].keywords.clear();
        let model = file.into_model().unwrap();
        assert!(matches!(Scorer::new(model), Err(ScoreError::NoKeywords(_))));
    }

    #[test]
    fn input_detection() {
        let csv = b"id,store,title,description\na,ios,Quiz,\nb,mars,t,d\n";
        let rows = read_score_input(csv, InputFormat::Auto).unwrap();
        let lines = scorer().score_all(rows);
        assert!(matches!(lines[0], ScoreLine::Scored(_)));
        assert!(matches!(lines[1], ScoreLine::Rejected { row: 2, .. }));

        let text = b"A fun trivia game for survivors";
        let rows = read_score_input(text, InputFormat::Auto).unwrap();
        assert_eq!(rows.len(), 1);
        assert_eq!(rows[0].as_ref().unwrap().description, "A fun trivia game for survivors");

        let json = br#"[{"id":"j","store":"android","title":"t","description":"quiz"}]"#;
        let rows = read_score_input(json, InputFormat::Auto).unwrap();
        assert_eq!(rows[0].as_ref().unwrap().id, "j");
    }
}
