//! Acceptance suite. Prints one line per criterion and exits nonzero if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::Command;
use std::time::{Duration, Instant};

use gamiscreen::evaluation::{calibration_strata, cohen_kappa_from_table, roc_auc, CalibrationConfig};
use gamiscreen::logit::{fit_logistic, DesignMatrix, FitConfig, LogLikelihood};
use gamiscreen::pipeline::write_csv;
use gamiscreen::synthetic::{generate_corpus, sample_bits, DEFAULT_RATES};
use gamiscreen::text::extract;
use gamiscreen::{paper_model, AppRecord, FeatureVector, Lexicon, Store, VariableGrouping};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within_budget(elapsed: Duration, budget: Duration) -> Result<(), String> {
    ensure(elapsed < budget, || format!("took {elapsed:.2?}, budget {budget:?}"))
}

/// Printed rows: variable, OR, CI low, CI high (log scale).
const PRINTED: [(&str, f64, f64, f64); 15] = [
    ("Activity Tracking", 23.91, 2.62, 3.72),
    ("Change", 1.09, -0.54, 0.72),
    ("Diary", 14.53, 1.15, 4.19),
    ("Engagement", 3.11, 0.04, 2.22),
    ("Entertainment", 1.64, -0.04, 1.03),
    ("Game Labels", 25.38, 2.33, 4.12),
    ("Player Aspects", 0.62, -1.41, 0.47),
    ("Progress", 2.03, -0.07, 1.48),
    ("Purpose", 0.40, -2.21, 0.43),
    ("Quest", 0.57, -1.18, 0.09),
    ("Quizzes", 24.44, 1.94, 4.45),
    ("Routine", 4.14, -0.43, 3.28),
    ("Statistics", 3.84, 0.23, 2.46),
    ("Story", 2.62, 0.12, 1.80),
    ("Constant", 0.05, -3.23, -2.47),
];

fn ac1_frozen_model() -> Outcome {
    let start = Instant::now();
    let model = paper_model();
    let names: Vec<&str> = model.variable_names().collect();
    let mut worst_or: f64 = 0.0;
    let mut worst_mid: f64 = 0.0;
    for (name, or, lo, hi) in PRINTED {
        let j = match name {
            "Constant" => 0,
            _ => 1 + names.iter().position(|n| *n == name).ok_or(format!("{name} missing"))?,
        };
        let beta = model.coefficient(j);
        let d_or = (beta.exp() - or).abs();
        let d_mid = (beta - (lo + hi) / 2.0).abs();
        ensure(d_or <= 0.01 + 1e-12, || format!("{name}: exp(beta) {:.4} vs OR {or}", beta.exp()))?;
        ensure(d_mid <= 0.05 + 1e-12, || format!("{name}: beta {beta:.4} vs CI midpoint {}", (lo + hi) / 2.0))?;
        worst_or = worst_or.max(d_or);
        worst_mid = worst_mid.max(d_mid);
    }
    within_budget(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("15 rows, max |exp(b)-OR| {worst_or:.4} <= 0.01, max |b-mid| {worst_mid:.4} <= 0.05"))
}

fn ac2_zero_vector() -> Outcome {
    let start = Instant::now();
    let model = paper_model();
    let p = model.predict(&FeatureVector::zeros(model.n_vars())).map_err(|e| e.to_string())?;
    ensure((p - 0.0546).abs() <= 0.0005, || format!("p = {p}"))?;
    within_budget(start.elapsed(), Duration::from_secs(1))?;
    Ok(format!("p = {p:.5}, target 0.0546 +/- 0.0005"))
}

/// `count` evenly spaced values with the given mean and half-width.
fn ramp(count: usize, mean: f64, half_width: f64) -> Vec<f64> {
    (0..count)
        .map(|i| mean + half_width * (2.0 * i as f64 / (count - 1) as f64 - 1.0))
        .collect()
}

fn ac3_table_iv() -> Outcome {
    let start = Instant::now();
    // Sorted scores. Ranks 150..204 share one value so the lower half ends at
    // 204 records; ranks 264..266 tie so the third quartile ends at 266.
    let m1 = (0.048 * 204.0 - 54.0 * 0.06) / 150.0;
    let m3 = (0.096 * 62.0 - 2.0 * 0.13) / 60.0;
    let mut scores = ramp(150, m1, 0.015);
    scores.extend([0.06; 54]);
    scores.extend(ramp(60, m3, 0.02));
    scores.extend([0.13; 2]);
    scores.extend(ramp(87, 0.62, 0.3));
    let mut labels = vec![false; scores.len()];
    // 2 events in the first quartile (merged upward), 7 in the second, 9 and 53 above.
    for i in [10, 60, 95, 110, 125, 140, 160, 180, 200] {
        labels[i] = true;
    }
    for i in (204..266).step_by(7).take(9) {
        labels[i] = true;
    }
    for i in (266..353).take(53) {
        labels[i] = true;
    }
    // Shuffle so the input order carries no information.
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut order: Vec<usize> = (0..scores.len()).collect();
    rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
    let scores: Vec<f64> = order.iter().map(|&i| scores[i]).collect();
    let labels: Vec<bool> = order.iter().map(|&i| labels[i]).collect();

    let r = calibration_strata(&scores, &labels, &CalibrationConfig::default())
        .map_err(|e| e.to_string())?;
    let expected = [("Q1-Q2", 204, 0.044, 0.048), ("Q3", 62, 0.145, 0.096), ("Q4", 87, 0.609, 0.620)];
    ensure(r.strata.len() == 3, || format!("{} strata", r.strata.len()))?;
    let mut parts = Vec::new();
    for (s, (label, n, observed, predicted)) in r.strata.iter().zip(expected) {
        ensure(s.label == label && s.n_obs == n, || format!("stratum {} with {} records", s.label, s.n_obs))?;
        let rounded = (s.observed_rate * 1000.0).round() / 1000.0;
        ensure(rounded == observed, || format!("{label}: observed {}", s.observed_rate))?;
        ensure((s.mean_predicted - predicted).abs() <= 0.005, || {
            format!("{label}: mean predicted {}", s.mean_predicted)
        })?;
        parts.push(format!("{label} {n} {rounded:.3}/{:.3}", s.mean_predicted));
    }
    within_budget(start.elapsed(), Duration::from_secs(1))?;
    Ok(parts.join(", "))
}

fn ac4_recovery() -> Outcome {
    let start = Instant::now();
    let model = paper_model();
    let truth = model.coefficients().to_vec();
    let names: Vec<String> = model.variable_names().map(str::to_string).collect();
    let reps = 100;
    let mut all_within = 0;
    let mut per_term = vec![0usize; truth.len()];
    let mut worst_z: f64 = 0.0;
    for rep in 0..reps {
        let mut rng = ChaCha8Rng::seed_from_u64(20_000 + rep);
        let mut rows = Vec::with_capacity(20_000);
        let mut y = Vec::with_capacity(20_000);
        for _ in 0..20_000 {
            let bits = sample_bits(&mut rng, &DEFAULT_RATES);
            y.push(rng.gen_bool(model.predict_bits(&bits).unwrap()));
            rows.push(bits);
        }
        let design = DesignMatrix::new(names.clone(), rows, y).map_err(|e| e.to_string())?;
        let fit = fit_logistic(&design, &FitConfig::default())
            .map_err(|e| format!("rep {rep}: {e}"))?;
        let mut ok = true;
        for (j, &t) in truth.iter().enumerate() {
            let z = ((fit.coefficient(j) - t) / fit.standard_error(j)).abs();
            worst_z = worst_z.max(z);
            if z <= 3.0 {
                per_term[j] += 1;
            } else {
                ok = false;
            }
        }
        all_within += usize::from(ok);
    }
    let elapsed = start.elapsed();
    ensure(all_within >= 95, || {
        format!("{all_within}/{reps} reps had every coefficient within 3 SE (per-term {per_term:?})")
    })?;
    within_budget(elapsed, Duration::from_secs(60))?;
    Ok(format!(
        "{all_within}/{reps} reps with all 15 coefficients within 3 SE, fewest per-term {}/{reps}, max |z| {worst_z:.2}, {elapsed:.1?}",
        per_term.iter().min().unwrap()
    ))
}

fn pair_counting_auc(scores: &[f64], labels: &[bool]) -> f64 {
    let (mut wins, mut pairs) = (0.0, 0.0);
    for (i, &yi) in labels.iter().enumerate() {
        for (j, &yj) in labels.iter().enumerate() {
            if yi && !yj {
                pairs += 1.0;
                if scores[i] > scores[j] {
                    wins += 1.0;
                } else if scores[i] == scores[j] {
                    wins += 0.5;
                }
            }
        }
    }
    wins / pairs
}

fn ac5_auc_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    let mut done = 0;
    while done < 1000 {
        let n = rng.gen_range(2..=50);
        // Coarse grids produce plenty of ties.
        let levels = rng.gen_range(2..=20);
        let scores: Vec<f64> = (0..n).map(|_| rng.gen_range(0..levels) as f64 / levels as f64).collect();
        let labels: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.4)).collect();
        if labels.iter().all(|&b| b) || labels.iter().all(|&b| !b) {
            continue;
        }
        let auc = roc_auc(&scores, &labels).map_err(|e| e.to_string())?.auc;
        let diff = (auc - pair_counting_auc(&scores, &labels)).abs();
        ensure(diff <= 1e-12, || format!("instance {done}: difference {diff:e}"))?;
        worst = worst.max(diff);
        done += 1;
    }
    within_budget(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("1000 instances, max difference {worst:e} <= 1e-12"))
}

fn ac6_two_by_two() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (mut worst_b, mut worst_se): (f64, f64) = (0.0, 0.0);
    for t in 0..100 {
        let [a, b, c, d]: [usize; 4] = std::array::from_fn(|_| rng.gen_range(5..=150));
        let mut rows = Vec::new();
        let mut y = Vec::new();
        for (count, x, label) in [(a, true, true), (b, true, false), (c, false, true), (d, false, false)] {
            rows.extend(std::iter::repeat_n(vec![x], count));
            y.extend(std::iter::repeat_n(label, count));
        }
        let design = DesignMatrix::new(vec!["x".into()], rows, y).map_err(|e| e.to_string())?;
        let fit = fit_logistic(&design, &FitConfig::default()).map_err(|e| format!("table {t}: {e}"))?;
        let (a, b, c, d) = (a as f64, b as f64, c as f64, d as f64);
        let db = (fit.coefficient(1) - (a * d / (b * c)).ln()).abs();
        let dse = (fit.standard_error(1) - (1.0 / a + 1.0 / b + 1.0 / c + 1.0 / d).sqrt()).abs();
        ensure(db <= 1e-6 && dse <= 1e-6, || format!("table {t}: coefficient off by {db:e}, SE by {dse:e}"))?;
        worst_b = worst_b.max(db);
        worst_se = worst_se.max(dse);
    }
    within_budget(start.elapsed(), Duration::from_secs(5))?;
    Ok(format!("100 tables, max coefficient error {worst_b:.1e}, max SE error {worst_se:.1e}"))
}

fn ac7_kappa() -> Outcome {
    let k = |table: &[Vec<u64>]| cohen_kappa_from_table(table).map_err(|e| e.to_string());
    let hand = k(&[vec![40, 10], vec![10, 40]])?;
    ensure((hand.observed_agreement - 0.8).abs() <= 1e-15, || format!("po {}", hand.observed_agreement))?;
    ensure((hand.expected_agreement - 0.5).abs() <= 1e-15, || format!("pe {}", hand.expected_agreement))?;
    ensure((hand.kappa - 0.6).abs() <= 1e-15, || format!("kappa {}", hand.kappa))?;
    let perfect = k(&[vec![25, 0], vec![0, 75]])?;
    ensure(perfect.kappa == 1.0, || format!("perfect kappa {}", perfect.kappa))?;
    // Row margins 0.3/0.7 and column margins 0.6/0.4 with cells equal to their products.
    let chance = k(&[vec![18, 12], vec![42, 28]])?;
    ensure(chance.kappa.abs() <= 1e-12, || format!("chance kappa {}", chance.kappa))?;
    Ok(format!(
        "kappa {} (po 0.8, pe 0.5), perfect {}, chance {:e}",
        hand.kappa, perfect.kappa, chance.kappa
    ))
}

fn ac8_numerics() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let model = paper_model();
    let names: Vec<String> = model.variable_names().map(str::to_string).collect();
    let mut rows = Vec::new();
    let mut y = Vec::new();
    for _ in 0..2000 {
        let bits = sample_bits(&mut rng, &DEFAULT_RATES);
        y.push(rng.gen_bool(model.predict_bits(&bits).unwrap()));
        rows.push(bits);
    }
    let design = DesignMatrix::new(names, rows, y).map_err(|e| e.to_string())?;
    let ll = LogLikelihood::new(&design);
    let p = ll.n_params();
    let h = 1e-5;
    let rel = |a: f64, b: f64| (a - b).abs() / a.abs().max(b.abs()).max(1.0);
    let mut worst: f64 = 0.0;
    for point in 0..50 {
        let beta: Vec<f64> = (0..p).map(|_| rng.gen_range(-3.0..3.0)).collect();
        let grad = ll.gradient(&beta);
        let hess = ll.hessian(&beta);
        for j in 0..p {
            let mut up = beta.clone();
            let mut down = beta.clone();
            up[j] += h;
            down[j] -= h;
            let e = rel(grad[j], (ll.value(&up) - ll.value(&down)) / (2.0 * h));
            ensure(e <= 1e-4, || format!("point {point}: gradient[{j}] relative error {e:e}"))?;
            worst = worst.max(e);
            let (gu, gd) = (ll.gradient(&up), ll.gradient(&down));
            for i in 0..p {
                let e = rel(hess[i][j], (gu[i] - gd[i]) / (2.0 * h));
                ensure(e <= 1e-4, || format!("point {point}: hessian[{i}][{j}] relative error {e:e}"))?;
                worst = worst.max(e);
            }
        }
    }
    let fit = fit_logistic(&design, &FitConfig::default()).map_err(|e| e.to_string())?;
    let k = fit.coefficients().len() as f64;
    let lnl = ll.value(fit.coefficients());
    let aic = 2.0 * k - 2.0 * lnl;
    let stored = fit.aic().ok_or("fitted model has no AIC")?;
    ensure((aic - stored).abs() <= 1e-9, || format!("AIC {stored} vs recomputed {aic}"))?;
    Ok(format!("50 points, max relative error {worst:.1e} <= 1e-4; AIC {stored:.6} matches to 1e-9"))
}

fn ac9_determinism() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (records, _) = generate_corpus(&paper_model(), &DEFAULT_RATES, 1200, 9);
    let csv = dir.path().join("listings.csv");
    let file = std::fs::File::create(&csv).map_err(|e| e.to_string())?;
    write_csv(&records, file).map_err(|e| e.to_string())?;
    let train = |tag: &str| -> Result<(Vec<u8>, Vec<u8>), String> {
        let model = dir.path().join(format!("model-{tag}.json"));
        let report = dir.path().join(format!("report-{tag}.json"));
        let status = Command::new(env!("CARGO_BIN_EXE_gamiscreen"))
            .args(["train", "--seed", "2017", "--dataset"])
            .arg(&csv)
            .arg("--out")
            .arg(&model)
            .arg("--report")
            .arg(&report)
            .output()
            .map_err(|e| e.to_string())?;
        ensure(status.status.success(), || {
            format!("train failed: {}", String::from_utf8_lossy(&status.stderr))
        })?;
        Ok((
            std::fs::read(&model).map_err(|e| e.to_string())?,
            std::fs::read(&report).map_err(|e| e.to_string())?,
        ))
    };
    let (m1, r1) = train("a")?;
    let (m2, r2) = train("b")?;
    ensure(m1 == m2, || "model files differ".into())?;
    ensure(r1 == r2, || "report files differ".into())?;
    Ok(format!("model {} bytes and report {} bytes identical across runs", m1.len(), r1.len()))
}

/// Description and expected bits in grouping order: Activity Tracking,
/// Entertainment, Game Labels, Engagement, Quizzes, Player Aspects, Diary,
/// Change, Story, Progress, Purpose, Quest, Routine, Statistics.
const FEATURE_FIXTURES: &[(&str, &str)] = &[
    ("", "00000000000000"),
    ("Track your steps every day", "10000000000000"),
    ("TRACKING made easy.", "10000000000000"),
    ("Log, measure, monitor", "10000000000000"),
    ("e-mail: tracking@example.com", "10000000000000"),
    ("tracker for your logbook", "00000000000000"),
    ("monitoring logged logs", "00000000000000"),
    ("A fun way to learn", "01000000000000"),
    ("play-time!", "01000000000000"),
    ("Entertaining and ENTERTAINMENT", "01000000000000"),
    ("funnel cake and fun2play", "00000000000000"),
    ("Gamified self-exam", "00100000000000"),
    ("gaming, gamify, gamification", "00100000000000"),
    ("The gamer's guide to games4u", "00000000000000"),
    ("Engagement/engaging", "00010000000000"),
    ("Engage with your care team", "00010100000000"),
    ("Take the QUIZ!", "00001000000000"),
    ("Trivia night: test your knowledge", "00001000000000"),
    ("Multiplayer challenge mode", "00000100000000"),
    ("teams of players", "00000100000000"),
    ("players welcome", "00000000000000"),
    ("Keep a daily diary", "00000010000000"),
    ("diaries and journals", "00000000000000"),
    ("Change starts today", "00000001000000"),
    ("changes happen", "00000000000000"),
    ("Read her story.", "00000000100000"),
    ("storyline and stories", "00000000000000"),
    ("Progress-bar; progressive", "00000000010000"),
    ("Find your purpose", "00000000001000"),
    ("Quest/Routine", "00000000000110"),
    ("Weekly statistics, stats", "00000000000001"),
    ("FUN\u{2014}GAME\u{2014}DIARY", "01100010000000"),
    ("Le jeu: caf\u{e9}-diary", "00000010000000"),
    ("Pink ribbon awareness month", "00000000000000"),
    ("badges, points and leaderboard", "00000000000000"),
    (
        "Track diary progress with a quiz game, fun story, team quest, routine, statistics, purpose, change, engage",
        "11111111111111",
    ),
];

fn ac10_features() -> Outcome {
    let lexicon = Lexicon::default();
    let grouping = VariableGrouping::default();
    ensure(grouping.len() == 14, || format!("{} variables", grouping.len()))?;
    for (i, (text, expected)) in FEATURE_FIXTURES.iter().enumerate() {
        let record = AppRecord::new(format!("f{i}"), Store::Other, "", *text);
        let bits: String = extract(&record, &lexicon, &grouping)
            .bits
            .iter()
            .map(|&b| if b { '1' } else { '0' })
            .collect();
        ensure(bits == *expected, || format!("{text:?}: got {bits}, expected {expected}"))?;
    }
    Ok(format!("{} fixtures match", FEATURE_FIXTURES.len()))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("AC1", "frozen-model fidelity", ac1_frozen_model),
        ("AC2", "scoring regression", ac2_zero_vector),
        ("AC3", "quartile calibration replay", ac3_table_iv),
        ("AC4", "estimator recovery", ac4_recovery),
        ("AC5", "AUC oracle", ac5_auc_oracle),
        ("AC6", "closed-form logit", ac6_two_by_two),
        ("AC7", "kappa checks", ac7_kappa),
        ("AC8", "numerical hygiene", ac8_numerics),
        ("AC9", "determinism", ac9_determinism),
        ("AC10", "feature extraction", ac10_features),
    ];
    let mut failed = 0;
    for (id, name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        match outcome {
            Ok(detail) => println!("[PASS] {id} {name} ({elapsed:.2?}): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("[FAIL] {id} {name} ({elapsed:.2?}): {detail}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
