use std::collections::BTreeMap;

use super::{Formula, Term};

/// Conjuncts of `f` with nested conjunctions spliced in.
pub fn flatten_and(f: &Formula) -> Vec<Formula> {
    let mut out = Vec::new();
    push_conjuncts(f, &mut out);
    out
}

fn push_conjuncts(f: &Formula, out: &mut Vec<Formula>) {
    match f {
        Formula::And(gs) => gs.iter().for_each(|g| push_conjuncts(g, out)),
        other => out.push(other.clone()),
    }
}

/// Normal form for structural matching: conjunctions flattened, bound
/// variables renamed by binding depth. Free variables keep their names.
pub fn canonical(f: &Formula) -> Formula {
    canon(f, &mut BTreeMap::new(), 0)
}

/// Equality up to And-flattening and renaming of bound variables.
pub fn alpha_eq(a: &Formula, b: &Formula) -> bool {
    canonical(a) == canonical(b)
}

fn canon_term(t: &Term, env: &BTreeMap<String, String>) -> Term {
    match t {
        Term::Var(v) => Term::Var(env.get(v).cloned().unwrap_or_else(|| v.clone())),
        Term::Const(_) => t.clone(),
        Term::App(f, args) => Term::App(f.clone(), args.iter().map(|a| canon_term(a, env)).collect()),
    }
}

fn canon(f: &Formula, env: &mut BTreeMap<String, String>, depth: usize) -> Formula {
    match f {
        Formula::Atom(p, args) => Formula::Atom(p.clone(), args.iter().map(|a| canon_term(a, env)).collect()),
        Formula::Eq(l, r) => Formula::Eq(canon_term(l, env), canon_term(r, env)),
        Formula::Not(g) => Formula::not(canon(g, env, depth)),
        Formula::And(_) => Formula::And(flatten_and(f).iter().map(|g| canon(g, env, depth)).collect()),
        Formula::Or(gs) => Formula::Or(gs.iter().map(|g| canon(g, env, depth)).collect()),
        Formula::Implies(a, b) => Formula::implies(canon(a, env, depth), canon(b, env, depth)),
        Formula::Iff(a, b) => Formula::iff(canon(a, env, depth), canon(b, env, depth)),
        Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
            let saved: Vec<(String, Option<String>)> = vs.iter().map(|v| (v.clone(), env.get(v).cloned())).collect();
            let mut names = Vec::with_capacity(vs.len());
            for (i, v) in vs.iter().enumerate() {
                let name = format!("#{}", depth + i);
                env.insert(v.clone(), name.clone());
                names.push(name);
            }
            let body = canon(body, env, depth + vs.len());
            for (v, old) in saved {
                match old {
                    Some(o) => env.insert(v, o),
                    None => env.remove(&v),
                };
            }
            if matches!(f, Formula::Forall(..)) {
                Formula::Forall(names, Box::new(body))
            } else {
                Formula::Exists(names, Box::new(body))
            }
        }
        Formula::Verum => Formula::Verum,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: &str) -> Formula {
        Formula::atom("p", vec![Term::var(x)])
    }

    #[test]
    fn renaming_bound_variables_is_invisible() {
        let a = Formula::forall(vec!["X".into()], p("X"));
        let b = Formula::forall(vec!["Y".into()], p("Y"));
        assert!(alpha_eq(&a, &b));
        let c = Formula::forall(vec!["Y".into()], p("X"));
        assert!(!alpha_eq(&a, &c));
    }

    #[test]
    fn nested_conjunctions_flatten() {
        let a = Formula::And(vec![Formula::And(vec![Formula::prop("a"), Formula::prop("b")]), Formula::prop("c")]);
        let b = Formula::And(vec![Formula::prop("a"), Formula::prop("b"), Formula::prop("c")]);
        assert!(alpha_eq(&a, &b));
        assert_eq!(flatten_and(&a).len(), 3);
    }

    #[test]
    fn disjunctions_do_not_flatten() {
        let a = Formula::Or(vec![Formula::Or(vec![Formula::prop("a"), Formula::prop("b")]), Formula::prop("c")]);
        let b = Formula::Or(vec![Formula::prop("a"), Formula::prop("b"), Formula::prop("c")]);
        assert!(!alpha_eq(&a, &b));
    }
}
