use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::{check_lengths, EvalError};
use crate::logit::Z_95;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KappaResult {
    pub kappa: f64,
    pub standard_error: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub observed_agreement: f64,
    pub expected_agreement: f64,
    pub n_items: usize,
}

/// Two-rater Cohen's kappa over the categories either rater used.
pub fn cohen_kappa<T: Ord>(rater_a: &[T], rater_b: &[T]) -> Result<KappaResult, EvalError> {
    check_lengths(rater_a.len(), rater_b.len())?;
    let categories: Vec<&T> = rater_a
        .iter()
        .chain(rater_b)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let index = |v: &T| categories.binary_search(&v).expect("category collected above");
    let k = categories.len();
    let mut table = vec![vec![0u64; k]; k];
    for (a, b) in rater_a.iter().zip(rater_b) {
        table[index(a)][index(b)] += 1;
    }
    cohen_kappa_from_table(&table)
}

/// Kappa from a square contingency table (rows: rater A, columns: rater B).
///
/// The standard error is the large-sample non-null variance of Fleiss, Cohen
/// and Everitt.
pub fn cohen_kappa_from_table(table: &[Vec<u64>]) -> Result<KappaResult, EvalError> {
    let k = table.len();
    if let Some(row) = table.iter().find(|r| r.len() != k) {
        return Err(EvalError::LengthMismatch {
            left: k,
            right: row.len(),
        });
    }
    let n: u64 = table.iter().flatten().sum();
    if n < 2 {
        return Err(EvalError::TooFew {
            n: n as usize,
            needed: 2,
        });
    }
    let nf = n as f64;
    let p = |i: usize, j: usize| table[i][j] as f64 / nf;
    let row: Vec<f64> = (0..k).map(|i| (0..k).map(|j| p(i, j)).sum()).collect();
    let col: Vec<f64> = (0..k).map(|j| (0..k).map(|i| p(i, j)).sum()).collect();

    let po: f64 = (0..k).map(|i| p(i, i)).sum();
    let pe: f64 = (0..k).map(|i| row[i] * col[i]).sum();
    if (1.0 - pe).abs() < 1e-15 {
        return Err(EvalError::DegenerateAgreement);
    }
    let kappa = (po - pe) / (1.0 - pe);

    let one_minus = 1.0 - kappa;
    let diag: f64 = (0..k)
        .map(|i| p(i, i) * (1.0 - (row[i] + col[i]) * one_minus).powi(2))
        .sum();
    let off: f64 = (0..k)
        .flat_map(|i| (0..k).map(move |j| (i, j)))
        .filter(|(i, j)| i != j)
        .map(|(i, j)| p(i, j) * (col[i] + row[j]).powi(2))
        .sum();
    let correction = (kappa - pe * one_minus).powi(2);
    let variance = (diag + one_minus * one_minus * off - correction) / (nf * (1.0 - pe).powi(2));
    let standard_error = variance.max(0.0).sqrt();

    Ok(KappaResult {
        kappa,
        standard_error,
        ci_low: (kappa - Z_95 * standard_error).max(-1.0),
        ci_high: (kappa + Z_95 * standard_error).min(1.0),
        observed_agreement: po,
        expected_agreement: pe,
        n_items: n as usize,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hand_computed_table() {
        let r = cohen_kappa_from_table(&[vec![40, 10], vec![10, 40]]).unwrap();
        assert!((r.observed_agreement - 0.8).abs() < 1e-15);
        assert!((r.expected_agreement - 0.5).abs() < 1e-15);
        assert!((r.kappa - 0.6).abs() < 1e-15);
        // Variance terms evaluated by hand for margins (0.5, 0.5).
        let po: f64 = 0.8;
        let k: f64 = 0.6;
        let a = po * (1.0 - (1.0) * (1.0 - k)).powi(2);
        let b = (1.0 - k).powi(2) * 0.2 * 1.0;
        let c = (k - 0.5 * (1.0 - k)).powi(2);
        let se = ((a + b - c) / (100.0 * 0.25)).sqrt();
        assert!((r.standard_error - se).abs() < 1e-12);
        assert!(r.ci_low < r.kappa && r.kappa < r.ci_high);
    }

    #[test]
    fn perfect_agreement() {
        let a = ["bc", "health", "misc", "bc", "health"];
        let r = cohen_kappa(&a, &a).unwrap();
        assert_eq!(r.kappa, 1.0);
        assert_eq!(r.standard_error, 0.0);
    }

    #[test]
    fn chance_agreement() {
        // Margins (0.5, 0.5) x (0.5, 0.5) realized exactly.
        let r = cohen_kappa_from_table(&[vec![25, 25], vec![25, 25]]).unwrap();
        assert!(r.kappa.abs() < 1e-12);
    }

    #[test]
    fn symmetric_in_raters() {
        let a = [0, 1, 1, 2, 0, 2, 1, 0, 0, 2];
        let b = [0, 1, 2, 2, 1, 2, 1, 0, 2, 2];
        let ab = cohen_kappa(&a, &b).unwrap();
        let ba = cohen_kappa(&b, &a).unwrap();
        assert!((ab.kappa - ba.kappa).abs() < 1e-15);
        assert!((ab.standard_error - ba.standard_error).abs() < 1e-15);
    }

    #[test]
    fn errors() {
        assert_eq!(cohen_kappa(&[1, 1], &[1, 1]), Err(EvalError::DegenerateAgreement));
        assert!(matches!(cohen_kappa(&[1], &[1]), Err(EvalError::TooFew { .. })));
        assert!(matches!(cohen_kappa(&[1, 2], &[1]), Err(EvalError::LengthMismatch { .. })));
    }
}
