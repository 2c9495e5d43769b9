//! Random articles, formulas, prover databases and training examples.

use std::collections::BTreeSet;

use rand::seq::IndexedRandom;
use rand::Rng;

use proofdesk_core::advisor::TrainingExample;
use proofdesk_core::article::{
    Article, FunctorDecl, Item, ItemKind, Justification, Proof, ProofStep, RefKind, Reference, Reservation,
};
use proofdesk_core::formula::{Formula, Term};
use proofdesk_core::prover::{ProverKind, ProverSystem, SzsStatus};

/// Random term over `vars`, constants `a`, `b` and functors `f/1`, `g/2`.
pub fn random_term<R: Rng>(rng: &mut R, vars: &[String], depth: usize) -> Term {
    let leaf = depth == 0 || rng.random_bool(0.5);
    if leaf {
        if !vars.is_empty() && rng.random_bool(0.7) {
            return Term::Var(vars.choose(rng).unwrap().clone());
        }
        return Term::Const(["a", "b"].choose(rng).unwrap().to_string());
    }
    if rng.random_bool(0.5) {
        Term::App("f".into(), vec![random_term(rng, vars, depth - 1)])
    } else {
        Term::App(
            "g".into(),
            vec![random_term(rng, vars, depth - 1), random_term(rng, vars, depth - 1)],
        )
    }
}

fn random_atom<R: Rng>(rng: &mut R, vars: &[String]) -> Formula {
    match rng.random_range(0..5) {
        0 => Formula::prop("p"),
        1 => Formula::atom("q", vec![random_term(rng, vars, 2)]),
        2 => Formula::atom("r", vec![random_term(rng, vars, 1), random_term(rng, vars, 1)]),
        3 => Formula::Eq(random_term(rng, vars, 1), random_term(rng, vars, 1)),
        _ => Formula::atom("set", vec![random_term(rng, vars, 1)]),
    }
}

/// Random closed first-order formula. Quantified variables are drawn from
/// `X`, `Y`, `Z`, `W`; connectives never nest directly in themselves.
pub fn random_formula<R: Rng>(rng: &mut R, vars: &[String], depth: usize) -> Formula {
    if depth == 0 || rng.random_bool(0.25) {
        return random_atom(rng, vars);
    }
    let sub = |rng: &mut R, bad: fn(&Formula) -> bool| loop {
        let g = random_formula(rng, vars, depth - 1);
        if !bad(&g) {
            break g;
        }
    };
    match rng.random_range(0..7) {
        0 => Formula::not(random_formula(rng, vars, depth - 1)),
        1 => Formula::And((0..rng.random_range(2..=3)).map(|_| sub(rng, |g| matches!(g, Formula::And(_)))).collect()),
        2 => Formula::Or((0..rng.random_range(2..=3)).map(|_| sub(rng, |g| matches!(g, Formula::Or(_)))).collect()),
        3 => Formula::implies(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1)),
        4 => Formula::iff(random_formula(rng, vars, depth - 1), random_formula(rng, vars, depth - 1)),
        k => {
            let fresh: Vec<String> = ["X", "Y", "Z", "W"]
                .iter()
                .map(|s| s.to_string())
                .filter(|v| !vars.contains(v))
                .collect();
            if fresh.is_empty() {
                return random_atom(rng, vars);
            }
            let n = rng.random_range(1..=fresh.len().min(2));
            let bound: Vec<String> = fresh[..n].to_vec();
            let mut inner = vars.to_vec();
            inner.extend(bound.iter().cloned());
            let forall = k == 5;
            let body = loop {
                let g = random_formula(rng, &inner, depth - 1);
                let same = if forall {
                    matches!(g, Formula::Forall(..))
                } else {
                    matches!(g, Formula::Exists(..))
                };
                if !same {
                    break g;
                }
            };
            if forall {
                Formula::forall(bound, body)
            } else {
                Formula::exists(bound, body)
            }
        }
    }
}

struct ArticleGen<'r, R> {
    rng: &'r mut R,
    labels: usize,
    items: Vec<String>,
}

impl<R: Rng> ArticleGen<'_, R> {
    fn label(&mut self) -> String {
        self.labels += 1;
        format!("l{}", self.labels)
    }

    fn refs(&mut self, visible: &[String]) -> Vec<Reference> {
        let n = self.rng.random_range(1..=3);
        (0..n)
            .map(|_| {
                if !visible.is_empty() && self.rng.random_bool(0.8) {
                    Reference {
                        name: visible.choose(self.rng).unwrap().clone(),
                        kind: RefKind::Local,
                    }
                } else {
                    Reference {
                        name: format!("t{}_zoo", self.rng.random_range(1..9)),
                        kind: RefKind::Library,
                    }
                }
            })
            .collect()
    }

    fn proof(&mut self, vars: &[String], visible: &[String], depth: usize, allow_let: bool) -> Proof {
        let mut steps = Vec::new();
        let mut vars = vars.to_vec();
        let mut visible = visible.to_vec();
        if allow_let && self.rng.random_bool(0.5) {
            steps.push(ProofStep::Let {
                vars: vec!["X".into()],
            });
            vars.push("X".into());
        }
        for _ in 0..self.rng.random_range(1..=4) {
            let f = random_formula(self.rng, &vars, 2);
            match self.rng.random_range(0..3) {
                0 => {
                    let label = self.rng.random_bool(0.5).then(|| self.label());
                    if let Some(l) = &label {
                        visible.push(l.clone());
                    }
                    steps.push(ProofStep::Assume { label, formula: f });
                }
                k => {
                    let just = if depth < 2 && self.rng.random_bool(0.2) {
                        Justification::Proof(self.proof(&vars, &visible, depth + 1, false))
                    } else {
                        Justification::By(self.refs(&visible))
                    };
                    if k == 1 {
                        let label = self.label();
                        steps.push(ProofStep::Aux {
                            label: label.clone(),
                            formula: f,
                            just,
                        });
                        visible.push(label);
                    } else {
                        steps.push(ProofStep::Thus { formula: f, just });
                    }
                }
            }
        }
        Proof { steps }
    }
}

/// A random syntactically valid article. Proof skeletons need not
/// discharge their theses.
pub fn random_article<R: Rng>(rng: &mut R, name: &str) -> Article {
    let mut reservations = vec![Reservation {
        var: "X".into(),
        type_pred: "set".into(),
    }];
    if rng.random_bool(0.5) {
        reservations.push(Reservation {
            var: "Y".into(),
            type_pred: "elem".into(),
        });
    }
    let mut functors = Vec::new();
    if rng.random_bool(0.7) {
        functors.push(FunctorDecl {
            name: "f".into(),
            params: vec!["X".into()],
            result_type: "set".into(),
            ordinal: 1,
        });
    }
    if rng.random_bool(0.5) {
        functors.push(FunctorDecl {
            name: "a".into(),
            params: Vec::new(),
            result_type: "elem".into(),
            ordinal: functors.len() + 1,
        });
    }
    let mut g = ArticleGen {
        rng,
        labels: 0,
        items: Vec::new(),
    };
    let mut items = Vec::new();
    let (mut defs, mut thms) = (0, 0);
    for _ in 0..g.rng.random_range(0..=5) {
        let label = g.label();
        let formula = random_formula(g.rng, &[], 3);
        let item = if g.rng.random_bool(0.3) {
            defs += 1;
            Item {
                kind: ItemKind::Definition,
                label: label.clone(),
                ordinal: defs,
                formula,
                proof: None,
            }
        } else {
            thms += 1;
            let visible = g.items.clone();
            let proof = g.rng.random_bool(0.7).then(|| g.proof(&[], &visible, 0, true));
            Item {
                kind: ItemKind::Theorem,
                label: label.clone(),
                ordinal: thms,
                formula,
                proof,
            }
        };
        g.items.push(label);
        items.push(item);
    }
    Article {
        name: name.to_string(),
        reservations,
        functors,
        items,
    }
}

/// Random prover database, the internal system first.
pub fn random_system_db<R: Rng>(rng: &mut R) -> Vec<ProverSystem> {
    let statuses = [
        SzsStatus::Theorem,
        SzsStatus::CounterSatisfiable,
        SzsStatus::ResourceOut,
        SzsStatus::GaveUp,
    ];
    let mut out = vec![ProverSystem::internal()];
    for i in 0..rng.random_range(0..4) {
        let template = match rng.random_range(0..3) {
            0 => format!("/opt/prover{i}/bin/run %s"),
            1 => format!("prover{i} --cpu-limit=%d --tptp %s"),
            _ => format!("sh -c run{i} %d %s"),
        };
        let n = rng.random_range(1..=statuses.len());
        let patterns = statuses[..n]
            .iter()
            .enumerate()
            .map(|(j, s)| (format!("SZS status {}:{j}", s.name()), s.clone()))
            .collect();
        out.push(ProverSystem {
            name: format!("sys{i}"),
            kind: ProverKind::External,
            command_template: template,
            status_patterns: patterns,
            default_cpu: rng.random_range(1..120) as f64 / 2.0,
        });
    }
    out
}

/// Random training examples over small symbol and premise vocabularies.
pub fn random_examples<R: Rng>(rng: &mut R, n: usize) -> Vec<TrainingExample> {
    (0..n)
        .map(|_| {
            let goal: BTreeSet<String> = (0..rng.random_range(1..4)).map(|_| format!("s{}", rng.random_range(0..8))).collect();
            let used: BTreeSet<String> =
                (0..rng.random_range(1..4)).map(|_| format!("t{}_lib", rng.random_range(1..12))).collect();
            TrainingExample {
                goal_symbols: goal,
                used_premises: used,
            }
        })
        .collect()
}
