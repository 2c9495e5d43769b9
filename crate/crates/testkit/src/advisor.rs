//! Advisor fixtures: a hand corpus with a direct arithmetic oracle, a
//! topic-structured synthetic corpus, and recall measurement.

use std::collections::BTreeSet;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use proofdesk_core::advisor::{HintList, TrainingExample};

fn set(xs: &[&str]) -> BTreeSet<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

/// Three examples over premises `t1_a`, `d1_a`, `t2_a`.
pub fn hand_corpus() -> Vec<TrainingExample> {
    vec![
        TrainingExample {
            goal_symbols: set(&["p", "f"]),
            used_premises: set(&["t1_a", "d1_a"]),
        },
        TrainingExample {
            goal_symbols: set(&["p"]),
            used_premises: set(&["t1_a"]),
        },
        TrainingExample {
            goal_symbols: set(&["q", "f"]),
            used_premises: set(&["t2_a"]),
        },
    ]
}

/// Score of `premise` for `goal`, counted straight from `examples`:
/// log((n_p + 1) / (N + P)) + sum over s of log((n_ps + 1) / (n_p + 2)).
pub fn oracle_score(examples: &[TrainingExample], premise: &str, goal: &BTreeSet<String>) -> f64 {
    let total = examples.len() as f64;
    let premises: BTreeSet<&String> = examples.iter().flat_map(|e| &e.used_premises).collect();
    let with_p: Vec<&TrainingExample> = examples.iter().filter(|e| e.used_premises.contains(premise)).collect();
    let n_p = with_p.len() as f64;
    let mut score = ((n_p + 1.0) / (total + premises.len() as f64)).ln();
    for s in goal {
        let n_ps = with_p.iter().filter(|e| e.goal_symbols.contains(s)).count() as f64;
        score += ((n_ps + 1.0) / (n_p + 2.0)).ln();
    }
    score
}

/// Full ranking by `oracle_score`, descending, ties by name.
pub fn oracle_ranking(examples: &[TrainingExample], goal: &BTreeSet<String>) -> Vec<(String, f64)> {
    let premises: BTreeSet<&String> = examples.iter().flat_map(|e| &e.used_premises).collect();
    let mut out: Vec<(String, f64)> = premises
        .into_iter()
        .map(|p| (p.clone(), oracle_score(examples, p, goal)))
        .collect();
    out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    out
}

/// `n` examples drawn from 20 topics. Each topic owns 4 symbols and 5
/// premises; goals take 2 or 3 topic symbols plus one random symbol, and
/// premises 2 or 3 topic premises plus sometimes one random premise.
pub fn synthetic_corpus(seed: u64, n: usize) -> Vec<TrainingExample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    const TOPICS: usize = 20;
    let symbols: Vec<String> = (0..100).map(|i| format!("sym{i}")).collect();
    let premises: Vec<String> = (0..100).map(|i| format!("t{}_lib{}", i % 10 + 1, i / 10)).collect();
    (0..n)
        .map(|_| {
            let topic = rng.random_range(0..TOPICS);
            let tsyms = &symbols[topic * 4..topic * 4 + 4];
            let tprems = &premises[topic * 5..topic * 5 + 5];
            let k = rng.random_range(2..=3);
            let mut goal: BTreeSet<String> = tsyms.choose_multiple(&mut rng, k).cloned().collect();
            goal.insert(symbols.choose(&mut rng).unwrap().clone());
            let k = rng.random_range(2..=3);
            let mut used: BTreeSet<String> = tprems.choose_multiple(&mut rng, k).cloned().collect();
            if rng.random_bool(0.3) {
                used.insert(premises.choose(&mut rng).unwrap().clone());
            }
            TrainingExample {
                goal_symbols: goal,
                used_premises: used,
            }
        })
        .collect()
}

/// Shuffled 80/20 split.
pub fn split(examples: &[TrainingExample], seed: u64) -> (Vec<TrainingExample>, Vec<TrainingExample>) {
    let mut v = examples.to_vec();
    v.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    let cut = v.len() * 4 / 5;
    let test = v.split_off(cut);
    (v, test)
}

/// Fraction of `used` found among the first `k` hints.
pub fn recall_at(hints: &HintList, used: &BTreeSet<String>, k: usize) -> f64 {
    if used.is_empty() {
        return 0.0;
    }
    let found = hints.ranked.iter().take(k).filter(|h| used.contains(&h.name)).count();
    found as f64 / used.len() as f64
}

/// Expected recall@k of a uniformly random ranking of `candidates`
/// premises, for used premises that are all among the candidates.
pub fn random_recall(k: usize, candidates: usize) -> f64 {
    if candidates == 0 {
        0.0
    } else {
        k.min(candidates) as f64 / candidates as f64
    }
}

/// Examples covering exactly `premises` premises and `symbols` symbols.
pub fn large_corpus(premises: usize, symbols: usize, seed: u64) -> Vec<TrainingExample> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..premises * 2)
        .map(|i| {
            let mut goal: BTreeSet<String> = (0..5).map(|_| format!("s{}", rng.random_range(0..symbols))).collect();
            goal.insert(format!("s{}", i % symbols));
            let mut used: BTreeSet<String> = (0..2).map(|_| format!("p{}", rng.random_range(0..premises))).collect();
            used.insert(format!("p{}", i % premises));
            TrainingExample {
                goal_symbols: goal,
                used_premises: used,
            }
        })
        .collect()
}
