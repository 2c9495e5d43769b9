//! Random propositional obligations and a truth-table entailment oracle.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::IndexedRandom;
use rand::Rng;

use proofdesk_core::formula::{Formula, NamedFormula};

/// Random propositional formula over `atoms`; no `And` directly under
/// `And`, no `Or` directly under `Or`.
pub fn random_prop<R: Rng>(rng: &mut R, atoms: &[&str], depth: usize) -> Formula {
    if depth == 0 || rng.random_bool(0.3) {
        return Formula::prop(*atoms.choose(rng).unwrap());
    }
    match rng.random_range(0..5) {
        0 => Formula::not(random_prop(rng, atoms, depth - 1)),
        1 => {
            let n = rng.random_range(2..=3);
            let parts = (0..n)
                .map(|_| loop {
                    let g = random_prop(rng, atoms, depth - 1);
                    if !matches!(g, Formula::And(_)) {
                        break g;
                    }
                })
                .collect();
            Formula::And(parts)
        }
        2 => {
            let n = rng.random_range(2..=3);
            let parts = (0..n)
                .map(|_| loop {
                    let g = random_prop(rng, atoms, depth - 1);
                    if !matches!(g, Formula::Or(_)) {
                        break g;
                    }
                })
                .collect();
            Formula::Or(parts)
        }
        3 => Formula::implies(random_prop(rng, atoms, depth - 1), random_prop(rng, atoms, depth - 1)),
        _ => Formula::iff(random_prop(rng, atoms, depth - 1), random_prop(rng, atoms, depth - 1)),
    }
}

/// A premise list and a conjecture over at most four atoms.
pub fn random_prop_obligation<R: Rng>(rng: &mut R) -> (Vec<NamedFormula>, NamedFormula) {
    const ATOMS: [&str; 4] = ["p", "q", "r", "s"];
    let n_atoms = rng.random_range(1..=4);
    let atoms = &ATOMS[..n_atoms];
    let n_premises = rng.random_range(0..=4);
    let premises = (0..n_premises)
        .map(|i| NamedFormula::new(format!("ax{}", i + 1), random_prop(rng, atoms, 3)))
        .collect();
    (premises, NamedFormula::new("goal", random_prop(rng, atoms, 3)))
}

/// Value of a propositional formula. Panics on first-order syntax.
pub fn eval(f: &Formula, v: &BTreeMap<String, bool>) -> bool {
    match f {
        Formula::Atom(p, args) => {
            assert!(args.is_empty(), "not propositional");
            v[p]
        }
        Formula::Not(g) => !eval(g, v),
        Formula::And(gs) => gs.iter().all(|g| eval(g, v)),
        Formula::Or(gs) => gs.iter().any(|g| eval(g, v)),
        Formula::Implies(a, b) => !eval(a, v) || eval(b, v),
        Formula::Iff(a, b) => eval(a, v) == eval(b, v),
        Formula::Verum => true,
        Formula::Eq(..) | Formula::Forall(..) | Formula::Exists(..) => panic!("not propositional"),
    }
}

fn atoms_of(f: &Formula, out: &mut BTreeSet<String>) {
    match f {
        Formula::Atom(p, _) => {
            out.insert(p.clone());
        }
        Formula::Not(g) => atoms_of(g, out),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().for_each(|g| atoms_of(g, out)),
        Formula::Implies(a, b) | Formula::Iff(a, b) => {
            atoms_of(a, out);
            atoms_of(b, out);
        }
        _ => {}
    }
}

/// True iff every assignment satisfying all premises satisfies the goal.
pub fn entails(premises: &[Formula], goal: &Formula) -> bool {
    let mut atoms = BTreeSet::new();
    for f in premises.iter().chain(std::iter::once(goal)) {
        atoms_of(f, &mut atoms);
    }
    let atoms: Vec<String> = atoms.into_iter().collect();
    (0u32..1 << atoms.len()).all(|bits| {
        let v: BTreeMap<String, bool> = atoms
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), bits >> i & 1 == 1))
            .collect();
        !premises.iter().all(|p| eval(p, &v)) || eval(goal, &v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn oracle_basics() {
        let p = Formula::prop("p");
        let q = Formula::prop("q");
        assert!(entails(&[p.clone()], &p));
        assert!(!entails(&[p.clone()], &q));
        assert!(entails(&[p.clone(), Formula::implies(p.clone(), q.clone())], &q));
        assert!(entails(&[], &Formula::Or(vec![p.clone(), Formula::not(p.clone())])));
        assert!(entails(&[Formula::And(vec![p.clone(), Formula::not(p)])], &q));
    }
}
