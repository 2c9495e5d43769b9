//! The MFL article language: syntax tree, parser, printer and the render
//! model handed to the web front end.

mod lexer;
mod parser;
mod printer;
pub mod render;

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Formula, SignatureError, Term};

pub use lexer::{is_keyword, tokenize, Tok, Token};
pub use parser::{parse_article, parse_formula};
pub use printer::{formula_to_mfl, pretty_print};
pub use render::{render_model, RenderItem, RenderModel, RenderStep, Span, SpanKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reservation {
    pub var: String,
    pub type_pred: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FunctorDecl {
    pub name: String,
    pub params: Vec<String>,
    pub result_type: String,
    /// 1-based declaration order; the `k` index of `dt_k<N>`.
    pub ordinal: usize,
}

impl FunctorDecl {
    pub fn arity(&self) -> usize {
        self.params.len()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemKind {
    Definition,
    Theorem,
}

impl ItemKind {
    pub fn keyword(self) -> &'static str {
        match self {
            ItemKind::Definition => "definition",
            ItemKind::Theorem => "theorem",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Item {
    pub kind: ItemKind,
    pub label: String,
    /// 1-based, dense per kind.
    pub ordinal: usize,
    pub formula: Formula,
    pub proof: Option<Proof>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Proof {
    pub steps: Vec<ProofStep>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RefKind {
    /// An earlier item or step label of the same article.
    Local,
    /// `t<N>_<article>` or `d<N>_<article>` in the library.
    Library,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reference {
    pub name: String,
    pub kind: RefKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Justification {
    By(Vec<Reference>),
    Proof(Proof),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ProofStep {
    Let {
        vars: Vec<String>,
    },
    Assume {
        label: Option<String>,
        formula: Formula,
    },
    Aux {
        label: String,
        formula: Formula,
        just: Justification,
    },
    Thus {
        formula: Formula,
        just: Justification,
    },
}

impl ProofStep {
    pub fn keyword(&self) -> &'static str {
        match self {
            ProofStep::Let { .. } => "let",
            ProofStep::Assume { .. } => "assume",
            ProofStep::Aux { .. } => "aux",
            ProofStep::Thus { .. } => "thus",
        }
    }

    pub fn label(&self) -> Option<&str> {
        match self {
            ProofStep::Assume { label, .. } => label.as_deref(),
            ProofStep::Aux { label, .. } => Some(label),
            _ => None,
        }
    }

    pub fn formula(&self) -> Option<&Formula> {
        match self {
            ProofStep::Let { .. } => None,
            ProofStep::Assume { formula, .. }
            | ProofStep::Aux { formula, .. }
            | ProofStep::Thus { formula, .. } => Some(formula),
        }
    }

    pub fn justification(&self) -> Option<&Justification> {
        match self {
            ProofStep::Aux { just, .. } | ProofStep::Thus { just, .. } => Some(just),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Article {
    pub name: String,
    pub reservations: Vec<Reservation>,
    pub functors: Vec<FunctorDecl>,
    pub items: Vec<Item>,
}

impl Article {
    pub fn reserved_type(&self, var: &str) -> Option<&str> {
        self.reservations
            .iter()
            .find(|r| r.var == var)
            .map(|r| r.type_pred.as_str())
    }

    pub fn functor(&self, name: &str) -> Option<&FunctorDecl> {
        self.functors.iter().find(|f| f.name == name)
    }

    /// Adds the soft-type guards of reserved variables to every quantifier:
    /// `for X holds B` becomes `for X holds (T(X) implies B)` and
    /// `ex X st B` becomes `ex X st (T(X) & B)` when X is reserved for T.
    pub fn elaborate(&self, f: &Formula) -> Formula {
        match f {
            Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
                let body = self.elaborate(body);
                let guards: Vec<Formula> = vs
                    .iter()
                    .filter_map(|v| {
                        self.reserved_type(v)
                            .map(|t| Formula::atom(t, vec![Term::Var(v.clone())]))
                    })
                    .collect();
                if matches!(f, Formula::Forall(..)) {
                    let body = if guards.is_empty() {
                        body
                    } else {
                        Formula::implies(Formula::and(guards), body)
                    };
                    Formula::forall(vs.clone(), body)
                } else {
                    let mut parts = guards;
                    parts.push(body);
                    Formula::exists(vs.clone(), Formula::and(parts))
                }
            }
            Formula::Not(g) => Formula::not(self.elaborate(g)),
            Formula::And(gs) => Formula::And(gs.iter().map(|g| self.elaborate(g)).collect()),
            Formula::Or(gs) => Formula::Or(gs.iter().map(|g| self.elaborate(g)).collect()),
            Formula::Implies(a, b) => Formula::implies(self.elaborate(a), self.elaborate(b)),
            Formula::Iff(a, b) => Formula::iff(self.elaborate(a), self.elaborate(b)),
            Formula::Atom(..) | Formula::Eq(..) | Formula::Verum => f.clone(),
        }
    }

    /// Every functor and constant symbol used in item and step formulas.
    pub fn used_functors(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        fn walk(p: &Proof, out: &mut BTreeSet<String>) {
            for s in &p.steps {
                if let Some(f) = s.formula() {
                    out.extend(f.functors().into_keys());
                }
                if let Some(Justification::Proof(sub)) = s.justification() {
                    walk(sub, out);
                }
            }
        }
        for i in &self.items {
            out.extend(i.formula.functors().into_keys());
            if let Some(p) = &i.proof {
                walk(p, &mut out);
            }
        }
        out
    }

    /// Every non-logical symbol of the article.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = self.used_functors();
        out.extend(self.functors.iter().map(|f| f.name.clone()));
        out.extend(self.functors.iter().map(|f| f.result_type.clone()));
        out.extend(self.reservations.iter().map(|r| r.type_pred.clone()));
        fn walk(p: &Proof, out: &mut BTreeSet<String>) {
            for s in &p.steps {
                if let Some(f) = s.formula() {
                    out.extend(f.predicates().into_keys());
                }
                if let Some(Justification::Proof(sub)) = s.justification() {
                    walk(sub, out);
                }
            }
        }
        for i in &self.items {
            out.extend(i.formula.predicates().into_keys());
            if let Some(p) = &i.proof {
                walk(p, &mut out);
            }
        }
        out
    }

    pub fn item(&self, label: &str) -> Option<&Item> {
        self.items.iter().find(|i| i.label == label)
    }

    /// Number of `by` justifications anywhere in the article.
    pub fn by_count(&self) -> usize {
        fn count(p: &Proof) -> usize {
            p.steps
                .iter()
                .map(|s| match s.justification() {
                    Some(Justification::By(_)) => 1,
                    Some(Justification::Proof(sub)) => count(sub),
                    None => 0,
                })
                .sum()
        }
        self.items.iter().filter_map(|i| i.proof.as_ref()).map(count).sum()
    }
}

/// True for names of the form `t<N>_<article>` or `d<N>_<article>`.
pub fn is_library_reference(name: &str) -> bool {
    let rest = match name.strip_prefix('t').or_else(|| name.strip_prefix('d')) {
        Some(r) => r,
        None => return false,
    };
    let digits = rest.chars().take_while(|c| c.is_ascii_digit()).count();
    if digits == 0 {
        return false;
    }
    let Some(art) = rest[digits..].strip_prefix('_') else {
        return false;
    };
    is_article_name(art)
}

pub fn is_article_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_lowercase())
        && cs.all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_')
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("{line}:{column}: syntax error: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{line}:{column}: duplicate label `{label}`")]
    DuplicateLabel {
        line: usize,
        column: usize,
        label: String,
    },
    #[error("{line}:{column}: unknown reference `{name}`")]
    UnknownReference {
        line: usize,
        column: usize,
        name: String,
    },
    #[error("{line}:{column}: {source}")]
    Signature {
        line: usize,
        column: usize,
        source: SignatureError,
    },
    #[error("{line}:{column}: {message}")]
    Invalid {
        line: usize,
        column: usize,
        message: String,
    },
}

impl ParseError {
    pub fn line(&self) -> usize {
        match self {
            ParseError::Syntax { line, .. }
            | ParseError::DuplicateLabel { line, .. }
            | ParseError::UnknownReference { line, .. }
            | ParseError::Signature { line, .. }
            | ParseError::Invalid { line, .. } => *line,
        }
    }
}
