//! Clause normal form: NNF, Skolemization with reserved `skc_`/`skf_`
//! symbols, distribution, and equality axioms when `=` occurs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{Formula, NamedFormula, Term};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Atomic {
    Pred(String, Vec<Term>),
    Eq(Term, Term),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Literal {
    pub positive: bool,
    pub atom: Atomic,
}

impl Literal {
    pub fn new(positive: bool, atom: Atomic) -> Self {
        Literal { positive, atom }
    }

    pub fn negated(&self) -> Literal {
        Literal {
            positive: !self.positive,
            atom: self.atom.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Clause {
    pub literals: Vec<Literal>,
    /// Name of the input formula this clause came from; `None` for
    /// equality axioms.
    pub source: Option<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClausalForm {
    pub clauses: Vec<Clause>,
}

impl ClausalForm {
    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    /// Every non-logical symbol, Skolem symbols included.
    pub fn symbols(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        for c in &self.clauses {
            for l in &c.literals {
                let mut fs = BTreeMap::new();
                match &l.atom {
                    Atomic::Pred(p, args) => {
                        out.insert(p.clone());
                        args.iter().for_each(|a| a.collect_functors(&mut fs));
                    }
                    Atomic::Eq(a, b) => {
                        a.collect_functors(&mut fs);
                        b.collect_functors(&mut fs);
                    }
                }
                out.extend(fs.into_keys());
            }
        }
        out
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.positive {
            f.write_str("~")?;
        }
        match &self.atom {
            Atomic::Pred(p, args) if args.is_empty() => f.write_str(p),
            Atomic::Pred(p, args) => {
                write!(f, "{p}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
            Atomic::Eq(a, b) => write!(f, "{a}={b}"),
        }
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, l) in self.literals.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("]")
    }
}

#[derive(Clone, Debug)]
enum Nnf {
    True,
    False,
    Lit(Literal),
    And(Vec<Nnf>),
    Or(Vec<Nnf>),
    Forall(Vec<String>, Box<Nnf>),
    Exists(Vec<String>, Box<Nnf>),
}

fn atomic_of(f: &Formula) -> Option<Atomic> {
    match f {
        Formula::Atom(p, args) => Some(Atomic::Pred(p.clone(), args.clone())),
        Formula::Eq(a, b) => Some(Atomic::Eq(a.clone(), b.clone())),
        _ => None,
    }
}

fn mk_and(parts: Vec<Nnf>) -> Nnf {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Nnf::True => {}
            Nnf::False => return Nnf::False,
            Nnf::And(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Nnf::True,
        1 => out.pop().unwrap(),
        _ => Nnf::And(out),
    }
}

fn mk_or(parts: Vec<Nnf>) -> Nnf {
    let mut out = Vec::new();
    for p in parts {
        match p {
            Nnf::False => {}
            Nnf::True => return Nnf::True,
            Nnf::Or(inner) => out.extend(inner),
            other => out.push(other),
        }
    }
    match out.len() {
        0 => Nnf::False,
        1 => out.pop().unwrap(),
        _ => Nnf::Or(out),
    }
}

fn nnf(f: &Formula, pos: bool) -> Nnf {
    if let Some(a) = atomic_of(f) {
        return Nnf::Lit(Literal::new(pos, a));
    }
    match f {
        Formula::Verum => {
            if pos {
                Nnf::True
            } else {
                Nnf::False
            }
        }
        Formula::Not(g) => nnf(g, !pos),
        Formula::And(gs) => {
            let parts = gs.iter().map(|g| nnf(g, pos)).collect();
            if pos {
                mk_and(parts)
            } else {
                mk_or(parts)
            }
        }
        Formula::Or(gs) => {
            let parts = gs.iter().map(|g| nnf(g, pos)).collect();
            if pos {
                mk_or(parts)
            } else {
                mk_and(parts)
            }
        }
        Formula::Implies(a, b) => {
            if pos {
                mk_or(vec![nnf(a, false), nnf(b, true)])
            } else {
                mk_and(vec![nnf(a, true), nnf(b, false)])
            }
        }
        Formula::Iff(a, b) => {
            if pos {
                mk_and(vec![
                    mk_or(vec![nnf(a, false), nnf(b, true)]),
                    mk_or(vec![nnf(a, true), nnf(b, false)]),
                ])
            } else {
                mk_or(vec![
                    mk_and(vec![nnf(a, true), nnf(b, false)]),
                    mk_and(vec![nnf(a, false), nnf(b, true)]),
                ])
            }
        }
        Formula::Forall(vs, body) => {
            let body = nnf(body, pos);
            if pos {
                Nnf::Forall(vs.clone(), Box::new(body))
            } else {
                Nnf::Exists(vs.clone(), Box::new(body))
            }
        }
        Formula::Exists(vs, body) => {
            let body = nnf(body, pos);
            if pos {
                Nnf::Exists(vs.clone(), Box::new(body))
            } else {
                Nnf::Forall(vs.clone(), Box::new(body))
            }
        }
        Formula::Atom(..) | Formula::Eq(..) => unreachable!(),
    }
}

fn map_term(t: &Term, env: &BTreeMap<String, Term>) -> Term {
    match t {
        Term::Var(v) => env.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Const(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| map_term(a, env)).collect()),
    }
}

fn map_literal(l: &Literal, env: &BTreeMap<String, Term>) -> Literal {
    let atom = match &l.atom {
        Atomic::Pred(p, args) => Atomic::Pred(p.clone(), args.iter().map(|a| map_term(a, env)).collect()),
        Atomic::Eq(a, b) => Atomic::Eq(map_term(a, env), map_term(b, env)),
    };
    Literal::new(l.positive, atom)
}

fn literal_vars(l: &Literal, out: &mut BTreeSet<String>) {
    match &l.atom {
        Atomic::Pred(_, args) => args.iter().for_each(|a| a.collect_vars(out)),
        Atomic::Eq(a, b) => {
            a.collect_vars(out);
            b.collect_vars(out);
        }
    }
}

fn nnf_free_vars(n: &Nnf, out: &mut BTreeSet<String>) {
    match n {
        Nnf::True | Nnf::False => {}
        Nnf::Lit(l) => literal_vars(l, out),
        Nnf::And(ps) | Nnf::Or(ps) => ps.iter().for_each(|p| nnf_free_vars(p, out)),
        Nnf::Forall(vs, b) | Nnf::Exists(vs, b) => {
            let mut inner = BTreeSet::new();
            nnf_free_vars(b, &mut inner);
            out.extend(inner.into_iter().filter(|v| !vs.contains(v)));
        }
    }
}

struct Skolemizer<'a> {
    taken: &'a BTreeSet<String>,
    next_const: usize,
    next_fn: usize,
    next_var: usize,
}

impl Skolemizer<'_> {
    fn fresh_symbol(&mut self, constant: bool) -> String {
        loop {
            let name = if constant {
                self.next_const += 1;
                format!("skc_{}", self.next_const)
            } else {
                self.next_fn += 1;
                format!("skf_{}", self.next_fn)
            };
            if !self.taken.contains(&name) {
                return name;
            }
        }
    }

    fn fresh_var(&mut self) -> String {
        self.next_var += 1;
        format!("V{}", self.next_var)
    }

    /// Renames universals apart, replaces existentials by Skolem terms over
    /// the enclosing universals that occur free, and drops quantifiers.
    fn run(&mut self, n: &Nnf, env: &BTreeMap<String, Term>, universals: &[String]) -> Nnf {
        match n {
            Nnf::True | Nnf::False => n.clone(),
            Nnf::Lit(l) => Nnf::Lit(map_literal(l, env)),
            Nnf::And(ps) => mk_and(ps.iter().map(|p| self.run(p, env, universals)).collect()),
            Nnf::Or(ps) => mk_or(ps.iter().map(|p| self.run(p, env, universals)).collect()),
            Nnf::Forall(vs, body) => {
                let mut env = env.clone();
                let mut universals = universals.to_vec();
                for v in vs {
                    let fresh = self.fresh_var();
                    env.insert(v.clone(), Term::Var(fresh.clone()));
                    universals.push(fresh);
                }
                self.run(body, &env, &universals)
            }
            Nnf::Exists(vs, body) => {
                let mut free = BTreeSet::new();
                nnf_free_vars(n, &mut free);
                let free_renamed: BTreeSet<String> = free
                    .iter()
                    .filter_map(|v| match env.get(v) {
                        Some(Term::Var(r)) => Some(r.clone()),
                        _ => None,
                    })
                    .collect();
                let args: Vec<Term> = universals
                    .iter()
                    .filter(|u| free_renamed.contains(*u))
                    .map(|u| Term::Var(u.clone()))
                    .collect();
                let mut env = env.clone();
                for v in vs {
                    let t = if args.is_empty() {
                        Term::Const(self.fresh_symbol(true))
                    } else {
                        Term::App(self.fresh_symbol(false), args.clone())
                    };
                    env.insert(v.clone(), t);
                }
                self.run(body, &env, universals)
            }
        }
    }
}

fn normalize_clause(mut lits: Vec<Literal>) -> Option<Vec<Literal>> {
    lits.sort_by(|a, b| a.atom.cmp(&b.atom).then(a.positive.cmp(&b.positive)));
    lits.dedup();
    for w in lits.windows(2) {
        if w[0].atom == w[1].atom && w[0].positive != w[1].positive {
            return None;
        }
    }
    if lits
        .iter()
        .any(|l| l.positive && matches!(&l.atom, Atomic::Eq(a, b) if a == b))
    {
        return None;
    }
    Some(lits)
}

fn distribute(n: &Nnf) -> Vec<Vec<Literal>> {
    match n {
        Nnf::True => Vec::new(),
        Nnf::False => vec![Vec::new()],
        Nnf::Lit(l) => vec![vec![l.clone()]],
        Nnf::And(ps) => {
            let mut out: Vec<Vec<Literal>> = Vec::new();
            for p in ps {
                for c in distribute(p) {
                    if !out.contains(&c) {
                        out.push(c);
                    }
                }
            }
            out
        }
        Nnf::Or(ps) => {
            let mut acc: Vec<Vec<Literal>> = vec![Vec::new()];
            for p in ps {
                let part = distribute(p);
                let mut next = Vec::new();
                for a in &acc {
                    for b in &part {
                        let mut lits = a.clone();
                        lits.extend(b.iter().cloned());
                        if let Some(c) = normalize_clause(lits) {
                            if !next.contains(&c) {
                                next.push(c);
                            }
                        }
                    }
                }
                acc = next;
            }
            acc
        }
        Nnf::Forall(..) | Nnf::Exists(..) => unreachable!("quantifiers removed before distribution"),
    }
}

/// Clauses equisatisfiable with `axioms ∪ {¬conjecture}`.
pub fn clausify(axioms: &[NamedFormula], conjecture: Option<&NamedFormula>) -> ClausalForm {
    let mut taken = BTreeSet::new();
    for a in axioms.iter().chain(conjecture) {
        taken.extend(a.formula.symbols());
    }
    let mut sk = Skolemizer {
        taken: &taken,
        next_const: 0,
        next_fn: 0,
        next_var: 0,
    };
    let mut clauses = Vec::new();
    let inputs = axioms
        .iter()
        .map(|a| (a, true))
        .chain(conjecture.map(|c| (c, false)));
    for (input, positive) in inputs {
        let n = nnf(&input.formula, positive);
        let n = sk.run(&n, &BTreeMap::new(), &[]);
        for lits in distribute(&n) {
            if let Some(lits) = normalize_clause(lits) {
                clauses.push(Clause {
                    literals: lits,
                    source: Some(input.name.clone()),
                });
            }
        }
    }
    let mut form = ClausalForm { clauses };
    add_equality_axioms(&mut form);
    form
}

fn collect_signature(form: &ClausalForm) -> (BTreeMap<String, usize>, BTreeMap<String, usize>, bool) {
    let mut preds = BTreeMap::new();
    let mut funcs = BTreeMap::new();
    let mut has_eq = false;
    for c in &form.clauses {
        for l in &c.literals {
            match &l.atom {
                Atomic::Pred(p, args) => {
                    preds.insert(p.clone(), args.len());
                    args.iter().for_each(|a| a.collect_functors(&mut funcs));
                }
                Atomic::Eq(a, b) => {
                    has_eq = true;
                    a.collect_functors(&mut funcs);
                    b.collect_functors(&mut funcs);
                }
            }
        }
    }
    (preds, funcs, has_eq)
}

fn eq_lit(positive: bool, a: Term, b: Term) -> Literal {
    Literal::new(positive, Atomic::Eq(a, b))
}

/// Reflexivity, symmetry, transitivity and congruence for every function
/// and predicate symbol, when equality occurs at all.
fn add_equality_axioms(form: &mut ClausalForm) {
    let (preds, funcs, has_eq) = collect_signature(form);
    if !has_eq {
        return;
    }
    let (x, y, z) = (Term::var("X"), Term::var("Y"), Term::var("Z"));
    let mut axioms = vec![
        vec![eq_lit(true, x.clone(), x.clone())],
        vec![eq_lit(false, x.clone(), y.clone()), eq_lit(true, y.clone(), x.clone())],
        vec![
            eq_lit(false, x.clone(), y.clone()),
            eq_lit(false, y.clone(), z.clone()),
            eq_lit(true, x.clone(), z.clone()),
        ],
    ];
    let args = |n: usize, i: usize, v: &Term| -> Vec<Term> {
        (0..n)
            .map(|j| if j == i { v.clone() } else { Term::Var(format!("A{j}")) })
            .collect()
    };
    for (f, &n) in &funcs {
        for i in 0..n {
            axioms.push(vec![
                eq_lit(false, x.clone(), y.clone()),
                eq_lit(true, Term::App(f.clone(), args(n, i, &x)), Term::App(f.clone(), args(n, i, &y))),
            ]);
        }
    }
    for (p, &n) in &preds {
        for i in 0..n {
            axioms.push(vec![
                eq_lit(false, x.clone(), y.clone()),
                Literal::new(false, Atomic::Pred(p.clone(), args(n, i, &x))),
                Literal::new(true, Atomic::Pred(p.clone(), args(n, i, &y))),
            ]);
        }
    }
    form.clauses.extend(axioms.into_iter().map(|literals| Clause { literals, source: None }));
}

#[cfg(test)]
mod tests {
    use super::*;

    fn named(name: &str, f: Formula) -> NamedFormula {
        NamedFormula::new(name, f)
    }

    fn lits(c: &Clause) -> Vec<String> {
        c.literals.iter().map(|l| l.to_string()).collect()
    }

    #[test]
    fn negated_conjecture_alone() {
        let form = clausify(&[], Some(&named("g", Formula::prop("p"))));
        assert_eq!(form.len(), 1);
        assert_eq!(lits(&form.clauses[0]), vec!["~p"]);
        assert_eq!(form.clauses[0].source.as_deref(), Some("g"));
    }

    #[test]
    fn axiom_and_negated_conjecture() {
        let form = clausify(&[named("a", Formula::prop("p"))], Some(&named("g", Formula::prop("p"))));
        let all: Vec<_> = form.clauses.iter().map(lits).collect();
        assert_eq!(all, vec![vec!["p"], vec!["~p"]]);
    }

    #[test]
    fn existential_conjecture_needs_no_skolem() {
        let ax = Formula::forall(vec!["X".into()], Formula::atom("p", vec![Term::var("X")]));
        let goal = Formula::exists(vec!["X".into()], Formula::atom("p", vec![Term::var("X")]));
        let form = clausify(&[named("a", ax)], Some(&named("g", goal)));
        assert_eq!(form.len(), 2);
        assert!(form.clauses[0].literals[0].positive);
        assert!(!form.clauses[1].literals[0].positive);
        let Atomic::Pred(_, args) = &form.clauses[1].literals[0].atom else { panic!() };
        assert!(args[0].is_var());
    }

    #[test]
    fn universal_conjecture_gets_skolem_constant() {
        let goal = Formula::forall(vec!["X".into()], Formula::atom("p", vec![Term::var("X")]));
        let form = clausify(&[], Some(&named("g", goal)));
        assert_eq!(lits(&form.clauses[0]), vec!["~p(skc_1)"]);
    }

    #[test]
    fn skolem_function_over_enclosing_universal() {
        let ax = Formula::forall(
            vec!["X".into()],
            Formula::exists(vec!["Y".into()], Formula::atom("r", vec![Term::var("X"), Term::var("Y")])),
        );
        let form = clausify(&[named("a", ax)], None);
        let s = lits(&form.clauses[0]).join("");
        assert!(s.starts_with("r(V1,skf_1(V1))"), "{s}");
    }

    #[test]
    fn skolem_names_avoid_existing_symbols() {
        let ax = Formula::atom("q", vec![Term::constant("skc_1")]);
        let goal = Formula::forall(vec!["X".into()], Formula::atom("p", vec![Term::var("X")]));
        let form = clausify(&[named("a", ax)], Some(&named("g", goal)));
        assert_eq!(lits(&form.clauses[1]), vec!["~p(skc_2)"]);
    }

    #[test]
    fn equality_triggers_axioms() {
        let ax = Formula::Eq(Term::constant("a"), Term::constant("b"));
        let form = clausify(&[named("a", ax)], Some(&named("g", Formula::prop("p"))));
        assert!(form.clauses.iter().any(|c| c.source.is_none()));
        let plain = clausify(&[], Some(&named("g", Formula::prop("p"))));
        assert!(plain.clauses.iter().all(|c| c.source.is_some()));
    }

    #[test]
    fn verum_conjecture_is_immediately_refuted() {
        let form = clausify(&[], Some(&named("g", Formula::Verum)));
        assert_eq!(form.len(), 1);
        assert!(form.clauses[0].literals.is_empty());
    }

    #[test]
    fn iff_expands_both_ways() {
        let ax = Formula::iff(Formula::prop("p"), Formula::prop("q"));
        let form = clausify(&[named("a", ax)], None);
        let all: Vec<_> = form.clauses.iter().map(lits).collect();
        assert_eq!(all, vec![vec!["~p", "q"], vec!["p", "~q"]]);
    }
}
