//! First-order terms and formulas shared by the article language, the
//! checker and the generated TPTP problems.

mod alpha;
pub mod cnf;
mod subst;
pub mod tptp;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use alpha::{alpha_eq, canonical, flatten_and};
pub use subst::{substitute, Binding};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Term {
    Var(String),
    Const(String),
    App(String, Vec<Term>),
}

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn constant(name: impl Into<String>) -> Term {
        Term::Const(name.into())
    }

    pub fn app(functor: impl Into<String>, args: Vec<Term>) -> Term {
        Term::App(functor.into(), args)
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn collect_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::Const(_) => {}
            Term::App(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn has_var(&self, name: &str) -> bool {
        match self {
            Term::Var(v) => v == name,
            Term::Const(_) => false,
            Term::App(_, args) => args.iter().any(|a| a.has_var(name)),
        }
    }

    /// Functor and constant symbols with their arities.
    pub fn collect_functors(&self, out: &mut BTreeMap<String, usize>) {
        match self {
            Term::Var(_) => {}
            Term::Const(c) => {
                out.insert(c.clone(), 0);
            }
            Term::App(f, args) => {
                out.insert(f.clone(), args.len());
                args.iter().for_each(|a| a.collect_functors(out));
            }
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) | Term::Const(v) => f.write_str(v),
            Term::App(name, args) => {
                write!(f, "{name}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Formula {
    Atom(String, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    /// At least two conjuncts.
    And(Vec<Formula>),
    /// At least two disjuncts.
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Iff(Box<Formula>, Box<Formula>),
    Forall(Vec<String>, Box<Formula>),
    Exists(Vec<String>, Box<Formula>),
    /// Only ever the thesis of a finished proof.
    Verum,
}

impl Formula {
    pub fn atom(pred: impl Into<String>, args: Vec<Term>) -> Formula {
        Formula::Atom(pred.into(), args)
    }

    pub fn prop(pred: impl Into<String>) -> Formula {
        Formula::Atom(pred.into(), Vec::new())
    }

    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, c: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(c))
    }

    pub fn iff(a: Formula, b: Formula) -> Formula {
        Formula::Iff(Box::new(a), Box::new(b))
    }

    pub fn forall(vars: Vec<String>, body: Formula) -> Formula {
        debug_assert!(!vars.is_empty());
        Formula::Forall(vars, Box::new(body))
    }

    pub fn exists(vars: Vec<String>, body: Formula) -> Formula {
        debug_assert!(!vars.is_empty());
        Formula::Exists(vars, Box::new(body))
    }

    /// Conjunction of `parts`: `Verum` when empty, the formula itself when
    /// there is exactly one.
    pub fn and(mut parts: Vec<Formula>) -> Formula {
        match parts.len() {
            0 => Formula::Verum,
            1 => parts.pop().unwrap(),
            _ => Formula::And(parts),
        }
    }

    /// Disjunction of at least one formula.
    pub fn or(mut parts: Vec<Formula>) -> Formula {
        assert!(!parts.is_empty(), "empty disjunction");
        if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Formula::Or(parts)
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let add_term = |t: &Term, bound: &Vec<String>, out: &mut BTreeSet<String>| {
            let mut vs = BTreeSet::new();
            t.collect_vars(&mut vs);
            out.extend(vs.into_iter().filter(|v| !bound.contains(v)));
        };
        match self {
            Formula::Atom(_, args) => args.iter().for_each(|a| add_term(a, bound, out)),
            Formula::Eq(l, r) => {
                add_term(l, bound, out);
                add_term(r, bound, out);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => fs.iter().for_each(|f| f.collect_free(bound, out)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
                let n = bound.len();
                bound.extend(vs.iter().cloned());
                body.collect_free(bound, out);
                bound.truncate(n);
            }
            Formula::Verum => {}
        }
    }

    pub fn is_closed(&self) -> bool {
        self.free_vars().is_empty()
    }

    /// Every variable name occurring anywhere, bound or free.
    pub fn all_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.visit(&mut |f| match f {
            Formula::Atom(_, args) => args.iter().for_each(|a| a.collect_vars(&mut out)),
            Formula::Eq(l, r) => {
                l.collect_vars(&mut out);
                r.collect_vars(&mut out);
            }
            Formula::Forall(vs, _) | Formula::Exists(vs, _) => out.extend(vs.iter().cloned()),
            _ => {}
        });
        out
    }

    /// Pre-order traversal over all subformulas.
    pub fn visit<'a>(&'a self, f: &mut impl FnMut(&'a Formula)) {
        f(self);
        match self {
            Formula::Not(g) | Formula::Forall(_, g) | Formula::Exists(_, g) => g.visit(f),
            Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| g.visit(f)),
            Formula::Implies(a, b) | Formula::Iff(a, b) => {
                a.visit(f);
                b.visit(f);
            }
            Formula::Atom(..) | Formula::Eq(..) | Formula::Verum => {}
        }
    }

    /// Predicate symbols with arities (equality excluded).
    pub fn predicates(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        self.visit(&mut |f| {
            if let Formula::Atom(p, args) = f {
                out.insert(p.clone(), args.len());
            }
        });
        out
    }

    /// Functor and constant symbols with arities (constants have arity 0).
    pub fn functors(&self) -> BTreeMap<String, usize> {
        let mut out = BTreeMap::new();
        self.visit(&mut |f| match f {
            Formula::Atom(_, args) => args.iter().for_each(|a| a.collect_functors(&mut out)),
            Formula::Eq(l, r) => {
                l.collect_functors(&mut out);
                r.collect_functors(&mut out);
            }
            _ => {}
        });
        out
    }

    /// The exact set of non-logical symbols: predicates, functors, constants.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.predicates().into_keys().collect();
        out.extend(self.functors().into_keys());
        out
    }

    pub fn contains_equality(&self) -> bool {
        let mut found = false;
        self.visit(&mut |f| found |= matches!(f, Formula::Eq(..)));
        found
    }

    /// Universal closure over the free variables, in name order.
    pub fn universal_closure(self) -> Formula {
        let free: Vec<String> = self.free_vars().into_iter().collect();
        if free.is_empty() {
            self
        } else {
            Formula::forall(free, self)
        }
    }
}

pub fn is_variable_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_uppercase())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn is_symbol_name(s: &str) -> bool {
    let mut cs = s.chars();
    matches!(cs.next(), Some(c) if c.is_ascii_lowercase())
        && cs.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Prefixes reserved for Skolem symbols introduced by clausification.
pub const SKOLEM_PREFIXES: [&str; 2] = ["skf_", "skc_"];

pub fn is_reserved_symbol(s: &str) -> bool {
    SKOLEM_PREFIXES.iter().any(|p| s.starts_with(p))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolKind {
    Predicate,
    Functor,
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolKind::Predicate => "predicate",
            SymbolKind::Functor => "functor",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("symbol `{symbol}` used with arity {found}, but it has arity {expected}")]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("symbol `{symbol}` used as a {found}, but it is a {expected}")]
    Kind {
        symbol: String,
        expected: SymbolKind,
        found: SymbolKind,
    },
}

/// Symbol table recording the kind and arity of every non-logical symbol.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signature {
    symbols: BTreeMap<String, (SymbolKind, usize)>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Records `name`, or checks it against an earlier record.
    pub fn record(&mut self, name: &str, kind: SymbolKind, arity: usize) -> Result<(), SignatureError> {
        match self.symbols.get(name) {
            None => {
                self.symbols.insert(name.to_string(), (kind, arity));
                Ok(())
            }
            Some(&(k, _)) if k != kind => Err(SignatureError::Kind {
                symbol: name.to_string(),
                expected: k,
                found: kind,
            }),
            Some(&(_, a)) if a != arity => Err(SignatureError::Arity {
                symbol: name.to_string(),
                expected: a,
                found: arity,
            }),
            Some(_) => Ok(()),
        }
    }

    pub fn get(&self, name: &str) -> Option<(SymbolKind, usize)> {
        self.symbols.get(name).copied()
    }

    pub fn contains(&self, name: &str) -> bool {
        self.symbols.contains_key(name)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, SymbolKind, usize)> {
        self.symbols.iter().map(|(n, &(k, a))| (n.as_str(), k, a))
    }

    /// Records every symbol of `f`.
    pub fn record_formula(&mut self, f: &Formula) -> Result<(), SignatureError> {
        for (p, n) in f.predicates() {
            self.record(&p, SymbolKind::Predicate, n)?;
        }
        for (g, n) in f.functors() {
            self.record(&g, SymbolKind::Functor, n)?;
        }
        Ok(())
    }
}

/// A formula with a name, as it appears in an ATP problem.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedFormula {
    pub name: String,
    pub formula: Formula,
}

impl NamedFormula {
    pub fn new(name: impl Into<String>, formula: Formula) -> Self {
        NamedFormula {
            name: name.into(),
            formula,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn free_vars_respect_binders() {
        let f = Formula::forall(
            vec!["X".into()],
            Formula::atom("q", vec![Term::var("X"), Term::var("Y")]),
        );
        assert_eq!(f.free_vars().into_iter().collect::<Vec<_>>(), vec!["Y"]);
        assert!(!f.is_closed());
    }

    #[test]
    fn symbols_split_by_position() {
        let f = Formula::Eq(
            Term::app("dom", vec![Term::constant("f")]),
            Term::var("X"),
        );
        assert!(f.predicates().is_empty());
        assert_eq!(f.functors().get("dom"), Some(&1));
        assert_eq!(f.functors().get("f"), Some(&0));
    }

    #[test]
    fn signature_rejects_kind_and_arity_clash() {
        let mut sig = Signature::new();
        sig.record("p", SymbolKind::Predicate, 1).unwrap();
        assert!(matches!(
            sig.record("p", SymbolKind::Predicate, 2),
            Err(SignatureError::Arity { .. })
        ));
        assert!(matches!(
            sig.record("p", SymbolKind::Functor, 1),
            Err(SignatureError::Kind { .. })
        ));
    }

    #[test]
    fn identifier_classes() {
        assert!(is_variable_name("X1_a"));
        assert!(!is_variable_name("x"));
        assert!(is_symbol_name("one_to_one"));
        assert!(!is_symbol_name("_a"));
        assert!(is_reserved_symbol("skc_3"));
    }
}
