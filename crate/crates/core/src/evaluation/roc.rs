use serde::{Deserialize, Serialize};

use super::{check_lengths, EvalError};
use crate::logit::Z_95;

/// One vertex of the ROC curve. `threshold` is `None` for the origin, which
/// lies above every score.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocPoint {
    pub threshold: Option<f64>,
    pub fpr: f64,
    pub tpr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RocCurve {
    pub points: Vec<RocPoint>,
    pub auc: f64,
    /// DeLong standard error of `auc`.
    pub auc_se: f64,
    pub auc_ci_low: f64,
    pub auc_ci_high: f64,
    pub n_pos: usize,
    pub n_neg: usize,
}

/// ROC curve over every distinct score (score ≥ threshold is positive), its
/// trapezoidal area and a DeLong 95% interval.
pub fn roc_auc(scores: &[f64], labels: &[bool]) -> Result<RocCurve, EvalError> {
    check_lengths(scores.len(), labels.len())?;
    if let Some(&bad) = scores.iter().find(|s| !s.is_finite()) {
        return Err(EvalError::NonFinite(bad));
    }
    let n_pos = labels.iter().filter(|&&y| y).count();
    let n_neg = labels.len() - n_pos;
    if n_pos == 0 || n_neg == 0 {
        return Err(EvalError::OneClass);
    }

    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));

    let mut points = vec![RocPoint {
        threshold: None,
        fpr: 0.0,
        tpr: 0.0,
    }];
    // Twice the area in units of (1 negative × 1 positive); integer-valued.
    let mut doubled_area = 0u64;
    let (mut tp, mut fp) = (0u64, 0u64);
    let mut i = 0;
    while i < order.len() {
        let threshold = scores[order[i]];
        let (prev_tp, prev_fp) = (tp, fp);
        while i < order.len() && scores[order[i]] == threshold {
            if labels[order[i]] {
                tp += 1;
            } else {
                fp += 1;
            }
            i += 1;
        }
        doubled_area += (fp - prev_fp) * (tp + prev_tp);
        points.push(RocPoint {
            threshold: Some(threshold),
            fpr: fp as f64 / n_neg as f64,
            tpr: tp as f64 / n_pos as f64,
        });
    }
    let auc = doubled_area as f64 / (2.0 * n_pos as f64 * n_neg as f64);

    let (placement_auc, auc_se) = delong(scores, labels, n_pos, n_neg);
    debug_assert!((placement_auc - auc).abs() < 1e-12);

    Ok(RocCurve {
        points,
        auc,
        auc_se,
        auc_ci_low: (auc - Z_95 * auc_se).max(0.0),
        auc_ci_high: (auc + Z_95 * auc_se).min(1.0),
        n_pos,
        n_neg,
    })
}

/// Mann–Whitney AUC from structural components and its DeLong standard error.
fn delong(scores: &[f64], labels: &[bool], n_pos: usize, n_neg: usize) -> (f64, f64) {
    let mut pos: Vec<f64> = Vec::with_capacity(n_pos);
    let mut neg: Vec<f64> = Vec::with_capacity(n_neg);
    for (&s, &y) in scores.iter().zip(labels) {
        if y {
            pos.push(s);
        } else {
            neg.push(s);
        }
    }
    pos.sort_by(f64::total_cmp);
    neg.sort_by(f64::total_cmp);

    // Share of the other class ranked below a score, ties counted half.
    let below = |sorted: &[f64], s: f64| {
        let lt = sorted.partition_point(|&v| v < s);
        let le = sorted.partition_point(|&v| v <= s);
        (lt as f64 + 0.5 * (le - lt) as f64) / sorted.len() as f64
    };
    let v10: Vec<f64> = pos.iter().map(|&s| below(&neg, s)).collect();
    let v01: Vec<f64> = neg.iter().map(|&s| 1.0 - below(&pos, s)).collect();

    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let var = |v: &[f64], m: f64| {
        if v.len() < 2 {
            0.0
        } else {
            v.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (v.len() - 1) as f64
        }
    };
    let auc = mean(&v10);
    let s10 = var(&v10, auc);
    let s01 = var(&v01, mean(&v01));
    (auc, (s10 / n_pos as f64 + s01 / n_neg as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_and_uninformative() {
        let labels = [false, true, false, true, true];
        let scores: Vec<f64> = labels.iter().map(|&y| f64::from(u8::from(y))).collect();
        assert_eq!(roc_auc(&scores, &labels).unwrap().auc, 1.0);
        let flat = roc_auc(&[0.3; 5], &labels).unwrap();
        assert_eq!(flat.auc, 0.5);
        assert_eq!(flat.points.len(), 2);
    }

    #[test]
    fn small_worked_example() {
        let roc = roc_auc(&[0.1, 0.4, 0.35, 0.8], &[false, false, true, true]).unwrap();
        assert_eq!(roc.auc, 0.75);
        let first = roc.points.first().unwrap();
        let last = roc.points.last().unwrap();
        assert_eq!((first.fpr, first.tpr), (0.0, 0.0));
        assert_eq!((last.fpr, last.tpr), (1.0, 1.0));
        assert!(roc.auc_ci_low <= roc.auc && roc.auc <= roc.auc_ci_high);
    }

    #[test]
    fn errors() {
        assert_eq!(roc_auc(&[0.1, 0.2], &[true, true]), Err(EvalError::OneClass));
        assert!(matches!(roc_auc(&[0.1], &[true, false]), Err(EvalError::LengthMismatch { .. })));
        assert!(matches!(roc_auc(&[f64::NAN, 0.1], &[true, false]), Err(EvalError::NonFinite(_))));
    }

    #[test]
    fn delong_matches_hand_computation() {
        // pos {0.8, 0.35}, neg {0.1, 0.4}: V10 = (1, 0.5), V01 = (1, 0.5).
        let roc = roc_auc(&[0.1, 0.4, 0.35, 0.8], &[false, false, true, true]).unwrap();
        let s = 0.125; // sample variance of (1, 0.5)
        assert!((roc.auc_se - (s / 2.0 + s / 2.0f64).sqrt()).abs() < 1e-15);
    }
}
