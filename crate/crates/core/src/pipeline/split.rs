use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::dataset::Dataset;

/// Identity of the generator behind every split, recorded in model files.
pub const SPLIT_RNG: &str = "ChaCha8Rng::seed_from_u64 (rand_chacha 0.3) + Fisher-Yates shuffle (rand 0.8)";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SplitError {
    #[error("{0} labeled records; at least 3 are needed to split")]
    TooFew(usize),
}

/// Disjoint generation (two thirds) and validation (one third) id sets.
/// Both lists keep dataset order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub seed: u64,
    pub generation_ids: Vec<String>,
    pub validation_ids: Vec<String>,
}

impl SplitPlan {
    pub fn generation_size(n: usize) -> usize {
        // round(2n/3); 2n/3 is never exactly x.5
        (2 * n + 1) / 3
    }

    pub fn generation_set(&self) -> HashSet<&str> {
        self.generation_ids.iter().map(String::as_str).collect()
    }
}

/// Seeded uniform partition of the labeled records.
pub fn split(dataset: &Dataset, seed: u64) -> Result<SplitPlan, SplitError> {
    let labeled: Vec<&str> = dataset.labeled().map(|(r, _)| r.id.as_str()).collect();
    let n = labeled.len();
    if n < 3 {
        return Err(SplitError::TooFew(n));
    }
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    order.shuffle(&mut rng);

    let mut in_generation = vec![false; n];
    for &i in &order[..SplitPlan::generation_size(n)] {
        in_generation[i] = true;
    }
    let (mut generation_ids, mut validation_ids) = (Vec::new(), Vec::new());
    for (i, id) in labeled.into_iter().enumerate() {
        if in_generation[i] {
            generation_ids.push(id.to_string());
        } else {
            validation_ids.push(id.to_string());
        }
    }
    Ok(SplitPlan {
        seed,
        generation_ids,
        validation_ids,
    })
}
