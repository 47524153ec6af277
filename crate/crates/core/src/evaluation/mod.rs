//! Discrimination, calibration, model comparison and rater agreement.

mod calibration;
mod compare;
pub mod export;
mod kappa;
mod roc;

pub use calibration::{calibration_strata, CalibrationConfig, CalibrationReport, Stratum};
pub use compare::{aic_compare, ModelCandidate, ModelRanking, RankedModel};
pub use kappa::{cohen_kappa, cohen_kappa_from_table, KappaResult};
pub use roc::{roc_auc, RocCurve, RocPoint};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("labels contain only one class")]
    OneClass,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("score {0} is not a finite number")]
    NonFinite(f64),
    #[error("probability {0} is outside [0, 1]")]
    NotAProbability(f64),
    #[error("{n} items are too few; at least {needed} required")]
    TooFew { n: usize, needed: usize },
    #[error("expected agreement is 1; kappa is undefined")]
    DegenerateAgreement,
    #[error("models were fitted on different observations ({first} vs {second})")]
    Incomparable { first: usize, second: usize },
    #[error("model {0:?} has no log-likelihood, so its AIC is unknown")]
    MissingLikelihood(String),
    #[error("no models to compare")]
    NoModels,
}

fn check_lengths(left: usize, right: usize) -> Result<(), EvalError> {
    if left != right {
        return Err(EvalError::LengthMismatch { left, right });
    }
    Ok(())
}
