//! Standalone TPTP text scanner for checking generated problems without
//! the library's own parser.

use std::collections::BTreeSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Statement {
    pub name: String,
    pub role: String,
    pub formula: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Word(String),
    Sym(String),
}

fn lex(text: &str) -> Vec<Tok> {
    let cs: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < cs.len() {
        let c = cs[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_alphanumeric() || c == '_' || c == '$' {
            let s = i;
            while i < cs.len() && (cs[i].is_ascii_alphanumeric() || cs[i] == '_' || cs[i] == '$') {
                i += 1;
            }
            out.push(Tok::Word(cs[s..i].iter().collect()));
        } else {
            let three: String = cs[i..(i + 3).min(cs.len())].iter().collect();
            let two: String = cs[i..(i + 2).min(cs.len())].iter().collect();
            let sym = if three == "<=>" || three == "<~>" {
                three
            } else if ["=>", "<=", "!=", "~|", "~&"].contains(&two.as_str()) {
                two
            } else {
                c.to_string()
            };
            i += sym.chars().count();
            out.push(Tok::Sym(sym));
        }
    }
    out
}

/// Splits problem text into `fof` statements, dropping `%` comment lines.
pub fn statements(text: &str) -> Result<Vec<Statement>, String> {
    let body: String = text
        .lines()
        .filter(|l| !l.trim_start().starts_with('%'))
        .collect::<Vec<_>>()
        .join("\n");
    let mut out = Vec::new();
    let mut rest = body.trim();
    while !rest.is_empty() {
        let Some(after) = rest.strip_prefix("fof(") else {
            return Err(format!("expected `fof(` at `{}`", &rest[..rest.len().min(20)]));
        };
        let mut depth = 1;
        let mut end = None;
        for (i, c) in after.char_indices() {
            match c {
                '(' => depth += 1,
                ')' => {
                    depth -= 1;
                    if depth == 0 {
                        end = Some(i);
                        break;
                    }
                }
                _ => {}
            }
        }
        let end = end.ok_or("unbalanced parentheses")?;
        let inner = &after[..end];
        let tail = after[end + 1..].trim_start();
        rest = tail.strip_prefix('.').ok_or("missing `.`")?.trim_start();
        let mut parts = inner.splitn(3, ',');
        let name = parts.next().ok_or("missing name")?.trim().to_string();
        let role = parts.next().ok_or("missing role")?.trim().to_string();
        let formula = parts.next().ok_or("missing formula")?.trim().to_string();
        out.push(Statement { name, role, formula });
    }
    Ok(out)
}

fn matching(toks: &[Tok], open: usize) -> Option<usize> {
    let mut depth = 0;
    for (j, t) in toks.iter().enumerate().skip(open) {
        match t {
            Tok::Sym(s) if s == "(" => depth += 1,
            Tok::Sym(s) if s == ")" => {
                depth -= 1;
                if depth == 0 {
                    return Some(j);
                }
            }
            _ => {}
        }
    }
    None
}

fn is_eq(t: Option<&Tok>) -> bool {
    matches!(t, Some(Tok::Sym(s)) if s == "=" || s == "!=")
}

/// (word index, is term position) for each lowercase word of `formula`.
fn classify(toks: &[Tok]) -> Vec<(usize, bool)> {
    let mut stack: Vec<bool> = Vec::new();
    let mut out = Vec::new();
    for (i, t) in toks.iter().enumerate() {
        let prev = i.checked_sub(1).map(|j| &toks[j]);
        let next = toks.get(i + 1);
        match t {
            Tok::Sym(s) if s == "(" || s == "[" => stack.push(s == "(" && matches!(prev, Some(Tok::Word(_)))),
            Tok::Sym(s) if s == ")" || s == "]" => {
                stack.pop();
            }
            Tok::Word(w) if w.starts_with(|c: char| c.is_ascii_lowercase()) => {
                let in_term = stack.iter().any(|&a| a)
                    || is_eq(prev)
                    || is_eq(next)
                    || (matches!(next, Some(Tok::Sym(s)) if s == "(")
                        && matching(toks, i + 1).is_some_and(|j| is_eq(toks.get(j + 1))));
                out.push((i, in_term));
            }
            _ => {}
        }
    }
    out
}

/// Functor and constant symbols occurring in `formula`.
pub fn term_symbols(formula: &str) -> BTreeSet<String> {
    let toks = lex(formula);
    classify(&toks)
        .into_iter()
        .filter(|(_, term)| *term)
        .filter_map(|(i, _)| match &toks[i] {
            Tok::Word(w) => Some(w.clone()),
            Tok::Sym(_) => None,
        })
        .collect()
}

/// Symbol typed by a type axiom: the head of the first argument of its
/// last atom.
pub fn typed_symbol(formula: &str) -> Option<String> {
    let toks = lex(formula);
    let (last_atom, _) = classify(&toks).into_iter().filter(|(_, term)| !term).last()?;
    match (toks.get(last_atom + 1), toks.get(last_atom + 2)) {
        (Some(Tok::Sym(s)), Some(Tok::Word(w))) if s == "(" => Some(w.clone()),
        _ => None,
    }
}

/// Violations of self-containedness: every functor or constant needs a
/// `dt_` axiom typing it, every cited name must be an axiom, names are
/// unique, and there is exactly one conjecture.
pub fn violations(text: &str, cited: &[String]) -> Vec<String> {
    let stmts = match statements(text) {
        Ok(s) => s,
        Err(e) => return vec![e],
    };
    let mut out = Vec::new();
    let mut names = BTreeSet::new();
    for s in &stmts {
        if !names.insert(s.name.clone()) {
            out.push(format!("duplicate name {}", s.name));
        }
    }
    let conjectures = stmts.iter().filter(|s| s.role == "conjecture").count();
    if conjectures != 1 {
        out.push(format!("{conjectures} conjectures"));
    }
    let typed: BTreeSet<String> = stmts
        .iter()
        .filter(|s| s.name.starts_with("dt_"))
        .filter_map(|s| typed_symbol(&s.formula))
        .collect();
    for s in &stmts {
        for sym in term_symbols(&s.formula) {
            if !typed.contains(&sym) {
                out.push(format!("{}: symbol {sym} has no dt_ axiom", s.name));
            }
        }
    }
    for c in cited {
        if !stmts.iter().any(|s| &s.name == c && s.role == "axiom") {
            out.push(format!("cited name {c} is not an axiom"));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classifies_terms() {
        let f = "! [X] : (set(X) => relation(relincl(X)))";
        assert_eq!(term_symbols(f), ["relincl".to_string()].into_iter().collect());
        assert_eq!(typed_symbol(f).as_deref(), Some("relincl"));
        assert_eq!(typed_symbol("set(c1)").as_deref(), Some("c1"));
        assert_eq!(term_symbols("f(a) = b & p"), ["a", "b", "f"].iter().map(|s| s.to_string()).collect());
    }

    #[test]
    fn finds_missing_type_axiom() {
        let text = "% origin: t1:1\nfof(d1_a, axiom, p(f(c1))).\nfof(dt_c1_1__a, axiom, set(c1)).\nfof(e1_1__a, conjecture, p(f(c1))).\n";
        let v = violations(text, &["d1_a".to_string()]);
        assert_eq!(v.len(), 2, "{v:?}");
        assert!(v.iter().all(|m| m.contains("symbol f")));
    }
}
