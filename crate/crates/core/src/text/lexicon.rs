use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const DEFAULT_LEXICON_JSON: &str = include_str!("../../data/gamification_lexicon.json");

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("invalid keyword {0:?}: keywords must be nonempty, lowercase and free of whitespace")]
    InvalidKeyword(String),
    #[error("duplicate keyword {0:?}")]
    DuplicateKeyword(String),
    #[error("variable {0:?} has no member keywords")]
    EmptyVariable(String),
    #[error("duplicate variable name {0:?}")]
    DuplicateVariable(String),
    #[error("keyword {keyword:?} of variable {variable:?} is not in the lexicon")]
    UnknownKeyword { variable: String, keyword: String },
    #[error("keyword {keyword:?} belongs to both {first:?} and {second:?}")]
    OverlappingVariables {
        keyword: String,
        first: String,
        second: String,
    },
    #[error("failed to read lexicon file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed lexicon file: {0}")]
    Json(#[from] serde_json::Error),
}

/// Set of lowercase single-token keywords searched for in listing text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lexicon {
    version: String,
    keywords: BTreeSet<String>,
}

impl Lexicon {
    pub fn new<I, S>(version: impl Into<String>, keywords: I) -> Result<Self, LexiconError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut set = BTreeSet::new();
        for keyword in keywords {
            let keyword = keyword.into();
            if !is_valid_keyword(&keyword) {
                return Err(LexiconError::InvalidKeyword(keyword));
            }
            if set.contains(&keyword) {
                return Err(LexiconError::DuplicateKeyword(keyword));
            }
            set.insert(keyword);
        }
        Ok(Self {
            version: version.into(),
            keywords: set,
        })
    }

    pub fn version(&self) -> &str {
        &self.version
    }

    pub fn len(&self) -> usize {
        self.keywords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keywords.is_empty()
    }

    pub fn contains(&self, keyword: &str) -> bool {
        self.keywords.contains(keyword)
    }

    /// Keywords in lexicographic order.
    pub fn keywords(&self) -> impl Iterator<Item = &str> {
        self.keywords.iter().map(String::as_str)
    }
}

impl Default for Lexicon {
    fn default() -> Self {
        LexiconFile::embedded()
            .into_parts()
            .expect("embedded lexicon is valid")
            .0
    }
}

fn is_valid_keyword(keyword: &str) -> bool {
    !keyword.is_empty()
        && keyword.chars().all(char::is_alphanumeric)
        && keyword.to_lowercase() == keyword
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub keywords: Vec<String>,
}

/// Ordered map from model variables to the disjoint keyword sets that trigger them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VariableGrouping {
    variables: Vec<Variable>,
}

impl VariableGrouping {
    pub fn new(variables: Vec<Variable>, lexicon: &Lexicon) -> Result<Self, LexiconError> {
        let mut names = HashSet::new();
        let mut owner: std::collections::HashMap<&str, &str> = Default::default();
        for var in &variables {
            if !names.insert(var.name.as_str()) {
                return Err(LexiconError::DuplicateVariable(var.name.clone()));
            }
            if var.keywords.is_empty() {
                return Err(LexiconError::EmptyVariable(var.name.clone()));
            }
            for keyword in &var.keywords {
                if !lexicon.contains(keyword) {
                    return Err(LexiconError::UnknownKeyword {
                        variable: var.name.clone(),
                        keyword: keyword.clone(),
                    });
                }
                if let Some(first) = owner.insert(keyword, &var.name) {
                    return Err(LexiconError::OverlappingVariables {
                        keyword: keyword.clone(),
                        first: first.to_string(),
                        second: var.name.clone(),
                    });
                }
            }
        }
        Ok(Self { variables })
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn len(&self) -> usize {
        self.variables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.variables.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.variables.iter().map(|v| v.name.as_str())
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    /// Restricts the grouping to the named variables, keeping grouping order.
    pub fn subset(&self, names: &[&str]) -> Self {
        Self {
            variables: self
                .variables
                .iter()
                .filter(|v| names.contains(&v.name.as_str()))
                .cloned()
                .collect(),
        }
    }
}

impl Default for VariableGrouping {
    fn default() -> Self {
        LexiconFile::embedded()
            .into_parts()
            .expect("embedded lexicon is valid")
            .1
    }
}

/// On-disk form of a lexicon together with its variable grouping.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexiconFile {
    pub version: String,
    pub keywords: Vec<String>,
    pub variables: Vec<Variable>,
}

impl LexiconFile {
    /// The shipped gamification keyword list and its 14-variable grouping.
    pub fn embedded() -> Self {
        serde_json::from_str(DEFAULT_LEXICON_JSON).expect("embedded lexicon parses")
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, LexiconError> {
        let text = std::fs::read_to_string(path)?;
        Ok(serde_json::from_str(&text)?)
    }

    pub fn from_parts(lexicon: &Lexicon, grouping: &VariableGrouping) -> Self {
        Self {
            version: lexicon.version().to_string(),
            keywords: lexicon.keywords().map(str::to_string).collect(),
            variables: grouping.variables().to_vec(),
        }
    }

    pub fn into_parts(self) -> Result<(Lexicon, VariableGrouping), LexiconError> {
        let lexicon = Lexicon::new(self.version, self.keywords)?;
        let grouping = VariableGrouping::new(self.variables, &lexicon)?;
        Ok((lexicon, grouping))
    }
}
