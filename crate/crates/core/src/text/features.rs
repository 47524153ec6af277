use std::collections::BTreeSet;

use serde::Serialize;

use super::lexicon::{Lexicon, VariableGrouping};
use super::tokenize::tokenize;
use crate::record::AppRecord;

/// Binary indicator per grouping variable, plus the keywords that set them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeatureVector {
    pub bits: Vec<bool>,
    pub matched_keywords: BTreeSet<String>,
}

impl FeatureVector {
    pub fn zeros(len: usize) -> Self {
        Self {
            bits: vec![false; len],
            matched_keywords: BTreeSet::new(),
        }
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn active(&self) -> usize {
        self.bits.iter().filter(|&&b| b).count()
    }
}

/// Lexicon keywords occurring as whole tokens in the record's title or description.
pub fn match_keywords(record: &AppRecord, lexicon: &Lexicon) -> BTreeSet<String> {
    tokenize(&record.title)
        .into_iter()
        .chain(tokenize(&record.description))
        .filter(|token| lexicon.contains(token))
        .collect()
}

pub fn build_features(matched: &BTreeSet<String>, grouping: &VariableGrouping) -> FeatureVector {
    let bits = grouping
        .variables()
        .iter()
        .map(|var| var.keywords.iter().any(|k| matched.contains(k)))
        .collect();
    // Keep only keywords that drive a variable so the explanation matches the bits.
    let matched_keywords = matched
        .iter()
        .filter(|k| grouping.variables().iter().any(|v| v.keywords.contains(k)))
        .cloned()
        .collect();
    FeatureVector {
        bits,
        matched_keywords,
    }
}

/// `match_keywords` followed by `build_features`.
pub fn extract(record: &AppRecord, lexicon: &Lexicon, grouping: &VariableGrouping) -> FeatureVector {
    build_features(&match_keywords(record, lexicon), grouping)
}
