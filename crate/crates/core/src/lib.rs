//! Automatic screening of app-store listings for gamification.
//!
//! Listings are reduced to binary keyword-group indicators ([`text`]), scored
//! with a logistic model ([`logit`]), and evaluated for discrimination,
//! calibration and rater agreement ([`evaluation`]). [`pipeline`] ties the
//! stages into an end-to-end study and batch scoring.

pub mod evaluation;
pub mod logit;
pub mod pipeline;
pub mod record;
pub mod synthetic;
pub mod text;

pub use logit::{fit_logistic, paper_model, FitConfig, FittedModel, LogitError};
pub use record::{AppRecord, AppType, Store};
pub use text::{FeatureVector, Lexicon, VariableGrouping};
