use std::fmt::Write;

use super::{Article, Item, Justification, Proof, ProofStep};
use crate::formula::{Formula, Term};

fn prec(f: &Formula) -> u8 {
    match f {
        Formula::Forall(..) | Formula::Exists(..) => 0,
        Formula::Iff(..) => 1,
        Formula::Implies(..) => 2,
        Formula::Or(_) => 3,
        Formula::And(_) => 4,
        Formula::Not(_) => 5,
        Formula::Atom(..) | Formula::Eq(..) | Formula::Verum => 6,
    }
}

fn term(t: &Term, out: &mut String) {
    match t {
        Term::Var(v) | Term::Const(v) => out.push_str(v),
        Term::App(f, args) => {
            out.push_str(f);
            out.push('(');
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    out.push_str(", ");
                }
                term(a, out);
            }
            out.push(')');
        }
    }
}

fn child(f: &Formula, paren_at_or_below: u8, out: &mut String) {
    if prec(f) <= paren_at_or_below {
        out.push('(');
        formula(f, out);
        out.push(')');
    } else {
        formula(f, out);
    }
}

fn formula(f: &Formula, out: &mut String) {
    match f {
        Formula::Atom(p, args) => {
            out.push_str(p);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    term(a, out);
                }
                out.push(')');
            }
        }
        Formula::Eq(l, r) => {
            term(l, out);
            out.push_str(" = ");
            term(r, out);
        }
        Formula::Not(g) => {
            out.push_str("not ");
            child(g, 4, out);
        }
        Formula::And(gs) | Formula::Or(gs) => {
            let (sep, p) = if matches!(f, Formula::And(_)) { (" & ", 4) } else { (" or ", 3) };
            for (i, g) in gs.iter().enumerate() {
                if i > 0 {
                    out.push_str(sep);
                }
                child(g, p, out);
            }
        }
        Formula::Implies(a, b) => {
            child(a, 2, out);
            out.push_str(" implies ");
            child(b, 1, out);
        }
        Formula::Iff(a, b) => {
            child(a, 1, out);
            out.push_str(" iff ");
            child(b, 1, out);
        }
        Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
            let (q, sep) = if matches!(f, Formula::Forall(..)) { ("for", "holds") } else { ("ex", "st") };
            let _ = write!(out, "{q} {} {sep} ", vs.join(", "));
            formula(body, out);
        }
        Formula::Verum => out.push_str("verum"),
    }
}

/// MFL concrete syntax of a formula. `Verum` prints as `verum`, which is
/// display-only: it is not part of the input language.
pub fn formula_to_mfl(f: &Formula) -> String {
    let mut out = String::new();
    formula(f, &mut out);
    out
}

fn justification(j: &Justification, indent: usize, out: &mut String) {
    match j {
        Justification::By(refs) => {
            let names: Vec<&str> = refs.iter().map(|r| r.name.as_str()).collect();
            let _ = writeln!(out, " by {};", names.join(", "));
        }
        Justification::Proof(p) => {
            out.push('\n');
            proof(p, indent, out);
        }
    }
}

fn proof(p: &Proof, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    let _ = writeln!(out, "{pad}proof");
    for s in &p.steps {
        let inner = "  ".repeat(indent + 1);
        out.push_str(&inner);
        match s {
            ProofStep::Let { vars } => {
                let _ = writeln!(out, "let {};", vars.join(", "));
            }
            ProofStep::Assume { label, formula: f } => {
                out.push_str("assume ");
                if let Some(l) = label {
                    let _ = write!(out, "{l}: ");
                }
                formula(f, out);
                out.push_str(";\n");
            }
            ProofStep::Aux { label, formula: f, just } => {
                let _ = write!(out, "{label}: ");
                formula(f, out);
                justification(just, indent + 1, out);
            }
            ProofStep::Thus { formula: f, just } => {
                out.push_str("thus ");
                formula(f, out);
                justification(just, indent + 1, out);
            }
        }
    }
    let _ = writeln!(out, "{pad}end;");
}

fn item(i: &Item, out: &mut String) {
    let _ = write!(out, "{} {}: ", i.kind.keyword(), i.label);
    formula(&i.formula, out);
    match &i.proof {
        None => out.push_str(";\n"),
        Some(p) => {
            out.push('\n');
            proof(p, 0, out);
        }
    }
}

/// Canonical source text; parsing it gives back an equal article.
pub fn pretty_print(a: &Article) -> String {
    let mut out = format!("article {};\n", a.name);
    for r in &a.reservations {
        let _ = writeln!(out, "reserve {} for {};", r.var, r.type_pred);
    }
    for f in &a.functors {
        let _ = writeln!(out, "func {}({}) -> {};", f.name, f.params.join(", "), f.result_type);
    }
    for i in &a.items {
        out.push('\n');
        item(i, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::article::{parse_article, parse_formula};
    use crate::formula::Signature;

    fn round(text: &str) {
        let f = parse_formula(text, &mut Signature::new()).unwrap();
        let printed = formula_to_mfl(&f);
        let again = parse_formula(&printed, &mut Signature::new()).unwrap();
        assert_eq!(f, again, "{text} -> {printed}");
    }

    #[test]
    fn formulas_round_trip() {
        round("for X holds p(X) implies p(X)");
        round("(a or b) or c");
        round("a & (for X holds p(X)) & b");
        round("not (a & b)");
        round("not not a");
        round("(a implies b) implies c");
        round("a implies (b iff c)");
        round("(a iff b) iff c");
        round("ex X, Y st f(X, Y) = g(Y) & not q");
        round("a implies (for X holds p(X)) implies b");
    }

    #[test]
    fn header_only_article() {
        let a = parse_article("article empty;").unwrap();
        assert_eq!(pretty_print(&a), "article empty;\n");
    }

    #[test]
    fn nested_proofs_round_trip() {
        let src = "article a; reserve X for set; theorem t1: for X holds p(X) & q(X) proof let X; \
                   h1: p(X) proof thus p(X) by t1_b; end; thus p(X) by h1; thus q(X) by t2_b; end;";
        let a = parse_article(src).unwrap();
        let printed = pretty_print(&a);
        assert_eq!(parse_article(&printed).unwrap(), a, "{printed}");
        assert!(printed.contains("  h1: p(X)\n  proof\n"), "{printed}");
    }
}
