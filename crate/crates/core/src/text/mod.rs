//! Tokenization of listing text and conversion to binary keyword features.
//!
//! Matching is whole-token and case-insensitive. There is no stemming: the
//! shipped lexicon enumerates inflected forms ("game", "games", ...) itself.

mod features;
mod lexicon;
mod tokenize;

pub use features::{build_features, extract, match_keywords, FeatureVector};
pub use lexicon::{Lexicon, LexiconError, LexiconFile, Variable, VariableGrouping};
pub use tokenize::tokenize;
