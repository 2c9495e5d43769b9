use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::article::{formula_to_mfl, Article, ProofStep};
use crate::formula::{canonical, flatten_and, substitute, Binding, Formula, Term};

/// A local constant introduced by `let`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScopeConstant {
    pub name: String,
    /// The N of `c<N>` and of its `dt_c<N>` axiom.
    pub number: usize,
    /// The `let` variable it stands for.
    pub var: String,
    pub type_pred: String,
}

/// Supplies fresh constant names `c1, c2, ...` avoiding existing symbols.
#[derive(Clone, Debug)]
pub struct ConstantSupply {
    taken: BTreeSet<String>,
    next: usize,
}

impl ConstantSupply {
    pub fn new(taken: BTreeSet<String>) -> Self {
        ConstantSupply { taken, next: 0 }
    }

    pub fn fresh(&mut self) -> (String, usize) {
        loop {
            self.next += 1;
            let name = format!("c{}", self.next);
            if !self.taken.contains(&name) {
                self.taken.insert(name.clone());
                return (name, self.next);
            }
        }
    }
}

/// The goal remaining at a point of a proof skeleton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thesis {
    pub current: Formula,
    pub scope: Vec<ScopeConstant>,
    /// `let` variables and the constants they denote.
    #[serde(skip)]
    pub bindings: Binding,
}

impl Thesis {
    pub fn new(goal: Formula) -> Self {
        Thesis {
            current: goal,
            scope: Vec::new(),
            bindings: Binding::new(),
        }
    }

    /// A thesis for a nested proof of `goal` sharing this scope.
    pub fn nested(&self, goal: Formula) -> Self {
        Thesis {
            current: goal,
            scope: self.scope.clone(),
            bindings: self.bindings.clone(),
        }
    }

    pub fn is_discharged(&self) -> bool {
        self.current == Formula::Verum
    }

    /// A step formula as the checker sees it: guards added, `let`
    /// variables replaced by their constants.
    pub fn instantiate(&self, article: &Article, f: &Formula) -> Formula {
        substitute(&article.elaborate(f), &self.bindings)
    }

    /// Introduces constants for `vars` without looking at the thesis.
    pub fn bind(&mut self, article: &Article, vars: &[String], supply: &mut ConstantSupply) -> Vec<Term> {
        let mut consts = Vec::new();
        for v in vars {
            let (name, number) = supply.fresh();
            self.bindings.insert(v.clone(), Term::Const(name.clone()));
            self.scope.push(ScopeConstant {
                name: name.clone(),
                number,
                var: v.clone(),
                type_pred: article.reserved_type(v).unwrap_or("object").to_string(),
            });
            consts.push(Term::Const(name));
        }
        consts
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{step}: {message}")]
pub struct SkeletonError {
    pub step: String,
    pub message: String,
}

fn skeleton(step: &ProofStep, message: String) -> SkeletonError {
    SkeletonError {
        step: step.keyword().to_string(),
        message,
    }
}

/// Thesis after `step`. `let` introduces fresh constants from `supply`;
/// `assume` and `thus` match structurally (conjunctions flattened, bound
/// variables renamed).
pub fn step_thesis(
    t: &Thesis,
    step: &ProofStep,
    article: &Article,
    supply: &mut ConstantSupply,
) -> Result<Thesis, SkeletonError> {
    if t.is_discharged() && !matches!(step, ProofStep::Aux { .. }) {
        return Err(skeleton(step, "the thesis is already proved".to_string()));
    }
    let shown = || formula_to_mfl(&t.current);
    match step {
        ProofStep::Let { vars } => {
            let Formula::Forall(qvars, body) = &t.current else {
                return Err(skeleton(step, format!("expected a universal thesis, found `{}`", shown())));
            };
            if qvars.len() < vars.len() {
                return Err(skeleton(
                    step,
                    format!("`let` binds {} variables but the thesis quantifies {}", vars.len(), qvars.len()),
                ));
            }
            let mut next = t.clone();
            let consts = next.bind(article, vars, supply);
            let binding: Binding = qvars.iter().cloned().zip(consts).collect();
            let rest: Vec<String> = qvars[vars.len()..].to_vec();
            let body = (**body).clone();
            let inner = if rest.is_empty() {
                body
            } else {
                Formula::forall(rest, body)
            };
            next.current = substitute(&inner, &binding);
            Ok(next)
        }
        ProofStep::Assume { formula, .. } => {
            let f = t.instantiate(article, formula);
            match &t.current {
                Formula::Implies(a, c) if canonical(a) == canonical(&f) => {
                    let mut next = t.clone();
                    next.current = (**c).clone();
                    Ok(next)
                }
                Formula::Implies(a, _) => Err(skeleton(
                    step,
                    format!("assumption `{}` does not match antecedent `{}`", formula_to_mfl(&f), formula_to_mfl(a)),
                )),
                _ => Err(skeleton(step, format!("expected an implication, found `{}`", shown()))),
            }
        }
        ProofStep::Aux { .. } => Ok(t.clone()),
        ProofStep::Thus { formula, .. } => {
            let f = t.instantiate(article, formula);
            let mut next = t.clone();
            if canonical(&t.current) == canonical(&f) {
                next.current = Formula::Verum;
                return Ok(next);
            }
            let have = flatten_and(&t.current);
            let given = flatten_and(&f);
            if have.len() > given.len()
                && have.iter().zip(&given).all(|(h, g)| canonical(h) == canonical(g))
            {
                next.current = Formula::and(have[given.len()..].to_vec());
                return Ok(next);
            }
            Err(skeleton(
                step,
                format!("`{}` is not the thesis `{}` or a leading part of it", formula_to_mfl(&f), shown()),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::article::parse_article;

    fn article() -> Article {
        parse_article("article a; reserve X for set;").unwrap()
    }

    fn assume(f: Formula) -> ProofStep {
        ProofStep::Assume { label: None, formula: f }
    }

    fn thus(f: Formula) -> ProofStep {
        ProofStep::Thus {
            formula: f,
            just: crate::article::Justification::By(Vec::new()),
        }
    }

    #[test]
    fn assume_discharges_antecedent() {
        let a = article();
        let t = Thesis::new(Formula::implies(Formula::prop("p"), Formula::prop("q")));
        let mut supply = ConstantSupply::new(BTreeSet::new());
        let next = step_thesis(&t, &assume(Formula::prop("p")), &a, &mut supply).unwrap();
        assert_eq!(next.current, Formula::prop("q"));
    }

    #[test]
    fn let_introduces_typed_constant() {
        let a = article();
        let t = Thesis::new(Formula::forall(vec!["X".into()], Formula::atom("r", vec![Term::var("X")])));
        let mut supply = ConstantSupply::new(BTreeSet::new());
        let next = step_thesis(&t, &ProofStep::Let { vars: vec!["X".into()] }, &a, &mut supply).unwrap();
        assert_eq!(next.current, Formula::atom("r", vec![Term::constant("c1")]));
        assert_eq!(next.scope[0].name, "c1");
        assert_eq!(next.scope[0].type_pred, "set");
    }

    #[test]
    fn thus_must_match_first_conjunct() {
        let a = article();
        let t = Thesis::new(Formula::And(vec![Formula::prop("p"), Formula::prop("q")]));
        let mut supply = ConstantSupply::new(BTreeSet::new());
        assert!(step_thesis(&t, &thus(Formula::prop("q")), &a, &mut supply).is_err());
        let next = step_thesis(&t, &thus(Formula::prop("p")), &a, &mut supply).unwrap();
        assert_eq!(next.current, Formula::prop("q"));
        let done = step_thesis(&next, &thus(Formula::prop("q")), &a, &mut supply).unwrap();
        assert!(done.is_discharged());
    }

    #[test]
    fn partial_let_keeps_remaining_quantifier() {
        let a = article();
        let body = Formula::atom("r", vec![Term::var("X"), Term::var("Y")]);
        let t = Thesis::new(Formula::forall(vec!["X".into(), "Y".into()], body));
        let mut supply = ConstantSupply::new(["c1".to_string()].into_iter().collect());
        let next = step_thesis(&t, &ProofStep::Let { vars: vec!["X".into()] }, &a, &mut supply).unwrap();
        assert_eq!(
            next.current,
            Formula::forall(vec!["Y".into()], Formula::atom("r", vec![Term::constant("c2"), Term::var("Y")]))
        );
    }

    #[test]
    fn let_on_non_universal_fails() {
        let a = article();
        let t = Thesis::new(Formula::prop("p"));
        let mut supply = ConstantSupply::new(BTreeSet::new());
        let err = step_thesis(&t, &ProofStep::Let { vars: vec!["X".into()] }, &a, &mut supply).unwrap_err();
        assert_eq!(err.step, "let");
    }
}
