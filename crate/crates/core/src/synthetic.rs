//! Synthetic listing corpora drawn from a known logistic model.
//!
//! Each variable is switched on independently with its own rate; active
//! variables contribute one randomly chosen member keyword to the listing
//! text, surrounded by filler words that are not in the keyword lexicon.
//! Labels are Bernoulli draws from the model's predicted probability.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::logit::FittedModel;
use crate::record::{AppRecord, AppType, Store};

/// Plausible per-variable rates for the shipped 14-variable grouping.
pub const DEFAULT_RATES: [f64; 14] = [
    0.25, 0.15, 0.08, 0.10, 0.06, 0.12, 0.05, 0.20, 0.10, 0.15, 0.06, 0.05, 0.08, 0.07,
];

const FILLER: &[&str] = &[
    "breast", "cancer", "awareness", "support", "information", "women", "survivors", "doctor",
    "treatment", "screening", "news", "guide", "daily", "care", "nutrition", "the", "and", "for",
    "your", "with", "our", "app", "free", "helps", "learn", "about", "health", "reminders",
    "community", "pink", "ribbon", "hope", "families", "clinic", "symptoms", "risk", "gamer",
    "gamers", "games4u", "tracker", "logbook", "funding", "players", "storyline",
];

const SEPARATORS: &[&str] = &[" ", " ", " ", ", ", ". ", "! ", " - ", "; ", " & "];

/// Independent Bernoulli draw per variable.
pub fn sample_bits<R: Rng + ?Sized>(rng: &mut R, rates: &[f64]) -> Vec<bool> {
    rates.iter().map(|&q| rng.gen_bool(q)).collect()
}

/// Title and description whose keyword matches reproduce `bits` exactly
/// under `keywords` (one member list per variable).
pub fn render_listing<R: Rng + ?Sized>(
    rng: &mut R,
    bits: &[bool],
    keywords: &[Vec<String>],
) -> (String, String) {
    let mut words: Vec<String> = (0..rng.gen_range(3..12))
        .map(|_| FILLER.choose(rng).expect("nonempty").to_string())
        .collect();
    for (bit, members) in bits.iter().zip(keywords) {
        if *bit {
            let kw = members.choose(rng).expect("variables have keywords").clone();
            let kw = match rng.gen_range(0..3) {
                0 => kw.to_uppercase(),
                1 => capitalize(&kw),
                _ => kw,
            };
            let at = rng.gen_range(0..=words.len());
            words.insert(at, kw);
        }
    }
    let mut description = String::new();
    for (i, w) in words.iter().enumerate() {
        if i > 0 {
            description.push_str(SEPARATORS.choose(rng).expect("nonempty"));
        }
        description.push_str(w);
    }
    let title = capitalize(FILLER.choose(rng).expect("nonempty"));
    (title, description)
}

fn capitalize(word: &str) -> String {
    let mut chars = word.chars();
    match chars.next() {
        Some(c) => c.to_uppercase().chain(chars).collect(),
        None => String::new(),
    }
}

/// `n` labeled listings drawn from `model`. Also returns the feature bits
/// of each listing.
pub fn generate_corpus(
    model: &FittedModel,
    rates: &[f64],
    n: usize,
    seed: u64,
) -> (Vec<AppRecord>, Vec<Vec<bool>>) {
    assert_eq!(rates.len(), model.n_vars(), "one rate per model variable");
    let keywords: Vec<Vec<String>> = model.variables().iter().map(|v| v.keywords.clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::with_capacity(n);
    let mut all_bits = Vec::with_capacity(n);
    for i in 0..n {
        let bits = sample_bits(&mut rng, rates);
        let p = model.predict_bits(&bits).expect("rates match model arity");
        let label = rng.gen_bool(p);
        let (title, description) = render_listing(&mut rng, &bits, &keywords);
        let store = if rng.gen_bool(0.5) { Store::Android } else { Store::Ios };
        let app_type = [AppType::BreastCancer, AppType::Health, AppType::Misc][rng.gen_range(0..3)];
        records.push(
            AppRecord::new(format!("syn-{i:06}"), store, title, description)
                .with_label(label)
                .with_app_type(app_type),
        );
        all_bits.push(bits);
    }
    (records, all_bits)
}
