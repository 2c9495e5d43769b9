//! Naive-Bayes premise advisor over conjecture symbols.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::Formula;
use crate::problem::TptpProblem;
use crate::prover::{RunResult, SzsStatus};
use crate::verifier::{Obligation, StepStatus, VerificationReport};

const HEADER: &str = "proofdesk-advisor 1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrainingExample {
    pub goal_symbols: BTreeSet<String>,
    pub used_premises: BTreeSet<String>,
}

impl TrainingExample {
    pub fn new<S: Into<String>, P: Into<String>>(
        goal: impl IntoIterator<Item = S>,
        premises: impl IntoIterator<Item = P>,
    ) -> Self {
        TrainingExample {
            goal_symbols: goal.into_iter().map(Into::into).collect(),
            used_premises: premises.into_iter().map(Into::into).collect(),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdvisorModel {
    pub total_examples: u64,
    pub premise_count: BTreeMap<String, u64>,
    /// premise -> symbol -> co-occurrence count.
    pub cofire: BTreeMap<String, BTreeMap<String, u64>>,
    pub symbol_vocabulary: BTreeSet<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Hint {
    pub name: String,
    pub score: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct HintList {
    pub ranked: Vec<Hint>,
}

impl HintList {
    pub fn names(&self) -> Vec<&str> {
        self.ranked.iter().map(|h| h.name.as_str()).collect()
    }
}

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub fn train(examples: &[TrainingExample]) -> AdvisorModel {
    let mut m = AdvisorModel::default();
    for e in examples {
        m.add(e);
    }
    m
}

impl AdvisorModel {
    pub fn add(&mut self, e: &TrainingExample) {
        self.total_examples += 1;
        self.symbol_vocabulary.extend(e.goal_symbols.iter().cloned());
        for p in &e.used_premises {
            *self.premise_count.entry(p.clone()).or_default() += 1;
            let row = self.cofire.entry(p.clone()).or_default();
            for s in &e.goal_symbols {
                *row.entry(s.clone()).or_default() += 1;
            }
        }
    }

    pub fn premises(&self) -> usize {
        self.premise_count.len()
    }

    pub fn cofire(&self, premise: &str, symbol: &str) -> u64 {
        self.cofire
            .get(premise)
            .and_then(|r| r.get(symbol))
            .copied()
            .unwrap_or(0)
    }

    /// Laplace-smoothed naive-Bayes log score of `premise`.
    pub fn score(&self, premise: &str, goal: &BTreeSet<String>) -> f64 {
        let count = self.premise_count.get(premise).copied().unwrap_or(0) as f64;
        let total = self.total_examples as f64;
        let p = self.premises() as f64;
        let row = self.cofire.get(premise);
        let mut s = ((count + 1.0) / (total + p)).ln();
        for sym in goal {
            let c = row.and_then(|r| r.get(sym)).copied().unwrap_or(0) as f64;
            s += ((c + 1.0) / (count + 2.0)).ln();
        }
        s
    }

    pub fn suggest_hints(&self, goal: &BTreeSet<String>, k: usize) -> HintList {
        self.rank(self.premise_count.keys(), goal, k)
    }

    /// Like `suggest_hints`, restricted to premises accepted by `eligible`.
    pub fn suggest_hints_among(&self, goal: &BTreeSet<String>, k: usize, eligible: impl Fn(&str) -> bool) -> HintList {
        self.rank(self.premise_count.keys().filter(|p| eligible(p)), goal, k)
    }

    fn rank<'a>(&self, premises: impl Iterator<Item = &'a String>, goal: &BTreeSet<String>, k: usize) -> HintList {
        let mut ranked: Vec<Hint> = premises
            .map(|p| Hint {
                name: p.clone(),
                score: self.score(p, goal),
            })
            .collect();
        ranked.sort_by(|a, b| {
            b.score
                .partial_cmp(&a.score)
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.name.cmp(&b.name))
        });
        ranked.truncate(k);
        HintList { ranked }
    }

    /// Line format: header, totals, then `premise<TAB>count`,
    /// `premise<TAB>symbol<TAB>count` and vocabulary sections.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{HEADER}");
        let _ = writeln!(out, "total\t{}", self.total_examples);
        let _ = writeln!(out, "[premises]\t{}", self.premise_count.len());
        for (p, c) in &self.premise_count {
            let _ = writeln!(out, "{p}\t{c}");
        }
        let pairs: usize = self.cofire.values().map(BTreeMap::len).sum();
        let _ = writeln!(out, "[cofire]\t{pairs}");
        for (p, row) in &self.cofire {
            for (s, c) in row {
                let _ = writeln!(out, "{p}\t{s}\t{c}");
            }
        }
        let _ = writeln!(out, "[symbols]\t{}", self.symbol_vocabulary.len());
        for s in &self.symbol_vocabulary {
            let _ = writeln!(out, "{s}");
        }
        out
    }

    pub fn parse(text: &str) -> Result<AdvisorModel, ModelError> {
        let bad = |line: usize, message: &str| ModelError::Malformed {
            line,
            message: message.to_string(),
        };
        let lines: Vec<&str> = text.lines().collect();
        if lines.first() != Some(&HEADER) {
            return Err(bad(1, "missing header"));
        }
        let mut m = AdvisorModel::default();
        let mut i = 1;
        let field = |i: usize, key: &str| -> Result<u64, ModelError> {
            let l = lines.get(i).ok_or_else(|| bad(i + 1, "unexpected end of file"))?;
            let v = l
                .strip_prefix(key)
                .and_then(|r| r.strip_prefix('\t'))
                .ok_or_else(|| bad(i + 1, &format!("expected `{key}`")))?;
            v.parse().map_err(|_| bad(i + 1, "bad count"))
        };
        m.total_examples = field(i, "total")?;
        i += 1;
        let n = field(i, "[premises]")?;
        i += 1;
        for _ in 0..n {
            let l = lines.get(i).ok_or_else(|| bad(i + 1, "unexpected end of file"))?;
            let (p, c) = l.split_once('\t').ok_or_else(|| bad(i + 1, "expected premise and count"))?;
            let c: u64 = c.parse().map_err(|_| bad(i + 1, "bad count"))?;
            m.premise_count.insert(p.to_string(), c);
            i += 1;
        }
        let n = field(i, "[cofire]")?;
        i += 1;
        for _ in 0..n {
            let l = lines.get(i).ok_or_else(|| bad(i + 1, "unexpected end of file"))?;
            let parts: Vec<&str> = l.split('\t').collect();
            let [p, s, c] = parts[..] else {
                return Err(bad(i + 1, "expected premise, symbol and count"));
            };
            let c: u64 = c.parse().map_err(|_| bad(i + 1, "bad count"))?;
            if c > m.premise_count.get(p).copied().unwrap_or(0) {
                return Err(bad(i + 1, "co-occurrence exceeds premise count"));
            }
            m.cofire.entry(p.to_string()).or_default().insert(s.to_string(), c);
            i += 1;
        }
        let n = field(i, "[symbols]")?;
        i += 1;
        for _ in 0..n {
            let l = lines.get(i).ok_or_else(|| bad(i + 1, "unexpected end of file"))?;
            m.symbol_vocabulary.insert(l.to_string());
            i += 1;
        }
        if i != lines.len() {
            return Err(bad(i + 1, "trailing data"));
        }
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        crate::write_atomic(path, self.to_text().as_bytes())?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<AdvisorModel, ModelError> {
        AdvisorModel::parse(&fs::read_to_string(path)?)
    }
}

/// Conjecture predicates and functors, with scope constants replaced by
/// their type predicates.
pub fn goal_symbols(conjecture: &Formula, scope: &[crate::verifier::ScopeConstant]) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = conjecture.predicates().into_keys().collect();
    for f in conjecture.functors().into_keys() {
        match scope.iter().find(|c| c.name == f) {
            Some(c) => {
                out.insert(c.type_pred.clone());
            }
            None => {
                out.insert(f);
            }
        }
    }
    out
}

/// One example per obligation that was verified or proved. Premises are
/// the used axioms of a Theorem run when it reported them, else every axiom
/// of the obligation's problem.
pub fn harvest(
    report: &VerificationReport,
    obligations: &[Obligation],
    problems: &[TptpProblem],
    runs: &[(String, RunResult)],
) -> Vec<TrainingExample> {
    let mut out = Vec::new();
    for o in obligations {
        let proved = runs
            .iter()
            .filter(|(id, r)| *id == o.id && r.status == SzsStatus::Theorem)
            .min_by_key(|(_, r)| r.used_axioms.as_ref().map_or(usize::MAX, Vec::len));
        let verified = report
            .obligation(&o.id)
            .is_some_and(|r| r.status == StepStatus::Verified);
        if proved.is_none() && !verified {
            continue;
        }
        let reported: Option<BTreeSet<String>> = proved
            .and_then(|(_, r)| r.used_axioms.as_ref())
            .map(|u| u.iter().filter(|n| **n != o.id).cloned().collect())
            .filter(|u: &BTreeSet<String>| !u.is_empty());
        let premises = match reported {
            Some(u) => u,
            None => match problems.iter().find(|p| p.name == o.id) {
                Some(p) => p.axioms.iter().map(|a| a.name.clone()).collect(),
                None => o.ref_names().into_iter().collect(),
            },
        };
        let goal = goal_symbols(&o.conjecture, &o.scope);
        if goal.is_empty() || premises.is_empty() {
            continue;
        }
        out.push(TrainingExample {
            goal_symbols: goal,
            used_premises: premises,
        });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(xs: &[&str]) -> BTreeSet<String> {
        xs.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn counting() {
        let m = train(&[
            TrainingExample::new(["p", "f"], ["t1_a"]),
            TrainingExample::new(["p"], ["t2_a"]),
        ]);
        assert_eq!(m.total_examples, 2);
        assert_eq!(m.premise_count["t1_a"], 1);
        assert_eq!(m.cofire("t1_a", "p"), 1);
        assert_eq!(m.cofire("t2_a", "f"), 0);
    }

    #[test]
    fn empty_model_gives_no_hints() {
        let m = train(&[]);
        assert_eq!(m.total_examples, 0);
        assert!(m.suggest_hints(&set(&["p"]), 5).ranked.is_empty());
    }

    #[test]
    fn empty_goal_ranks_by_frequency() {
        let m = train(&[
            TrainingExample::new(["p"], ["b"]),
            TrainingExample::new(["q"], ["b"]),
            TrainingExample::new(["q"], ["a"]),
        ]);
        assert_eq!(m.suggest_hints(&BTreeSet::new(), 10).names(), vec!["b", "a"]);
    }

    #[test]
    fn ties_break_by_name() {
        let m = train(&[TrainingExample::new(["p"], ["z", "a", "m"])]);
        assert_eq!(m.suggest_hints(&set(&["p"]), 10).names(), vec!["a", "m", "z"]);
        assert_eq!(m.suggest_hints(&set(&["p"]), 2).ranked.len(), 2);
    }

    #[test]
    fn text_round_trip() {
        let m = train(&[
            TrainingExample::new(["p", "f"], ["t1_a", "dt_k1_a"]),
            TrainingExample::new(["q"], ["t2_a"]),
        ]);
        assert_eq!(AdvisorModel::parse(&m.to_text()).unwrap(), m);
    }

    #[test]
    fn rejects_inconsistent_counts() {
        let text = format!("{HEADER}\ntotal\t1\n[premises]\t1\na\t1\n[cofire]\t1\na\tp\t2\n[symbols]\t0\n");
        assert!(AdvisorModel::parse(&text).is_err());
    }
}
