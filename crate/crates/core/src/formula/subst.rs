use std::collections::{BTreeMap, BTreeSet};

use super::{Formula, Term};

/// Simultaneous variable assignment.
pub type Binding = BTreeMap<String, Term>;

fn subst_term(t: &Term, binding: &Binding) -> Term {
    match t {
        Term::Var(v) => binding.get(v).cloned().unwrap_or_else(|| t.clone()),
        Term::Const(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| subst_term(a, binding)).collect()),
    }
}

fn fresh_var(base: &str, avoid: &BTreeSet<String>) -> String {
    (1..)
        .map(|i| format!("{base}{i}"))
        .find(|cand| !avoid.contains(cand))
        .unwrap()
}

/// Capture-avoiding simultaneous substitution. Bound variables that would
/// capture a variable of an inserted term are renamed.
pub fn substitute(f: &Formula, binding: &Binding) -> Formula {
    if binding.is_empty() {
        return f.clone();
    }
    match f {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| subst_term(a, binding)).collect()),
        Formula::Eq(l, r) => Formula::Eq(subst_term(l, binding), subst_term(r, binding)),
        Formula::Not(g) => Formula::not(substitute(g, binding)),
        Formula::And(gs) => Formula::And(gs.iter().map(|g| substitute(g, binding)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| substitute(g, binding)).collect()),
        Formula::Implies(a, b) => Formula::implies(substitute(a, binding), substitute(b, binding)),
        Formula::Iff(a, b) => Formula::iff(substitute(a, binding), substitute(b, binding)),
        Formula::Forall(vs, body) => {
            let (vs, inner) = enter_binder(vs, body, binding);
            Formula::Forall(vs, Box::new(substitute(body, &inner)))
        }
        Formula::Exists(vs, body) => {
            let (vs, inner) = enter_binder(vs, body, binding);
            Formula::Exists(vs, Box::new(substitute(body, &inner)))
        }
        Formula::Verum => Formula::Verum,
    }
}

fn enter_binder(vs: &[String], body: &Formula, binding: &Binding) -> (Vec<String>, Binding) {
    let body_free = body.free_vars();
    let mut inner: Binding = binding
        .iter()
        .filter(|(k, _)| !vs.contains(k) && body_free.contains(*k))
        .map(|(k, t)| (k.clone(), t.clone()))
        .collect();
    let mut range_vars = BTreeSet::new();
    inner.values().for_each(|t| t.collect_vars(&mut range_vars));

    let mut avoid = body.all_vars();
    avoid.extend(range_vars.iter().cloned());
    avoid.extend(inner.keys().cloned());
    avoid.extend(vs.iter().cloned());

    let mut renamed = Vec::with_capacity(vs.len());
    for v in vs {
        if range_vars.contains(v) {
            let fresh = fresh_var(v, &avoid);
            avoid.insert(fresh.clone());
            inner.insert(v.clone(), Term::Var(fresh.clone()));
            renamed.push(fresh);
        } else {
            renamed.push(v.clone());
        }
    }
    (renamed, inner)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::alpha_eq;

    fn bind(pairs: &[(&str, Term)]) -> Binding {
        pairs.iter().map(|(k, t)| (k.to_string(), t.clone())).collect()
    }

    #[test]
    fn replaces_free_variable() {
        let f = Formula::atom("p", vec![Term::var("X")]);
        let g = substitute(&f, &bind(&[("X", Term::constant("c"))]));
        assert_eq!(g, Formula::atom("p", vec![Term::constant("c")]));
    }

    #[test]
    fn avoids_capture_by_renaming() {
        // for X holds q(X,Y) with Y := X
        let f = Formula::forall(
            vec!["X".into()],
            Formula::atom("q", vec![Term::var("X"), Term::var("Y")]),
        );
        let g = substitute(&f, &bind(&[("Y", Term::var("X"))]));
        let Formula::Forall(vs, body) = &g else { panic!("{g:?}") };
        assert_ne!(vs[0], "X");
        assert_eq!(
            **body,
            Formula::atom("q", vec![Term::var(vs[0].clone()), Term::var("X")])
        );
        let expected = Formula::forall(
            vec!["Z".into()],
            Formula::atom("q", vec![Term::var("Z"), Term::var("X")]),
        );
        assert!(alpha_eq(&g, &expected));
    }

    #[test]
    fn bound_occurrences_untouched() {
        let f = Formula::exists(vec!["X".into()], Formula::atom("p", vec![Term::var("X")]));
        assert_eq!(substitute(&f, &bind(&[("X", Term::constant("c"))])), f);
    }

    #[test]
    fn idempotent_without_mapped_variables() {
        let f = Formula::implies(Formula::prop("p"), Formula::atom("r", vec![Term::var("Z")]));
        let g = substitute(&f, &bind(&[("W", Term::constant("c"))]));
        assert_eq!(g, f);
        assert_eq!(substitute(&g, &bind(&[("W", Term::constant("c"))])), g);
    }
}
