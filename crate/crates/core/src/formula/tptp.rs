//! TPTP first-order form: deterministic writer and a small reader for the
//! subset the writer emits (plus `!=`, `$false`-free input and source
//! annotations, which are skipped).

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Formula, Term};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Axiom,
    Conjecture,
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Role::Axiom => "axiom",
            Role::Conjecture => "conjecture",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TptpError {
    #[error("formula `{name}` is not closed; free variables: {}", vars.join(", "))]
    OpenFormula { name: String, vars: Vec<String> },
    #[error("TPTP syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
}

/// `fof(<name>, <role>, <formula>).`
pub fn serialize_tptp(name: &str, role: Role, f: &Formula) -> Result<String, TptpError> {
    let free = f.free_vars();
    if !free.is_empty() {
        return Err(TptpError::OpenFormula {
            name: name.to_string(),
            vars: free.into_iter().collect(),
        });
    }
    Ok(format!("fof({name}, {role}, {}).", formula_to_tptp(f)))
}

pub fn formula_to_tptp(f: &Formula) -> String {
    let mut out = String::new();
    write_formula(&mut out, f);
    out
}

fn write_term(out: &mut String, t: &Term) {
    let _ = write!(out, "{t}");
}

fn is_unitary(f: &Formula) -> bool {
    !matches!(f, Formula::And(_) | Formula::Or(_) | Formula::Implies(..) | Formula::Iff(..))
}

fn write_formula(out: &mut String, f: &Formula) {
    match f {
        Formula::And(gs) => write_list(out, gs, " & "),
        Formula::Or(gs) => write_list(out, gs, " | "),
        Formula::Implies(a, b) => {
            write_unitary(out, a);
            out.push_str(" => ");
            write_unitary(out, b);
        }
        Formula::Iff(a, b) => {
            write_unitary(out, a);
            out.push_str(" <=> ");
            write_unitary(out, b);
        }
        _ => write_unitary(out, f),
    }
}

fn write_list(out: &mut String, gs: &[Formula], sep: &str) {
    for (i, g) in gs.iter().enumerate() {
        if i > 0 {
            out.push_str(sep);
        }
        write_unitary(out, g);
    }
}

fn write_unitary(out: &mut String, f: &Formula) {
    match f {
        Formula::Atom(p, args) => {
            out.push_str(p);
            if !args.is_empty() {
                out.push('(');
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        out.push(',');
                    }
                    write_term(out, a);
                }
                out.push(')');
            }
        }
        Formula::Eq(l, r) => {
            write_term(out, l);
            out.push_str(" = ");
            write_term(out, r);
        }
        Formula::Not(g) => {
            out.push_str("~ ");
            write_unitary(out, g);
        }
        Formula::Forall(vs, body) | Formula::Exists(vs, body) => {
            out.push_str(if matches!(f, Formula::Forall(..)) { "! [" } else { "? [" });
            out.push_str(&vs.join(","));
            out.push_str("] : ");
            write_unitary(out, body);
        }
        Formula::Verum => out.push_str("$true"),
        binary => {
            debug_assert!(!is_unitary(binary));
            out.push('(');
            write_formula(out, binary);
            out.push(')');
        }
    }
}

/// One annotated formula read back from TPTP text.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TptpStatement {
    pub name: String,
    pub role: String,
    pub formula: Formula,
}

/// Parses a sequence of `fof` statements. Comments are skipped; a fourth
/// (source) argument is accepted and ignored.
pub fn parse_tptp(text: &str) -> Result<Vec<TptpStatement>, TptpError> {
    let mut p = Reader::new(text)?;
    let mut out = Vec::new();
    while !p.at_end() {
        out.push(p.statement()?);
    }
    Ok(out)
}

/// Parses a bare FOF formula.
pub fn parse_tptp_formula(text: &str) -> Result<Formula, TptpError> {
    let mut p = Reader::new(text)?;
    let f = p.logic_formula()?;
    if !p.at_end() {
        return Err(p.error("trailing input after formula"));
    }
    Ok(f)
}

/// The `%` comment lines at the top of a problem, without the marker.
pub fn leading_comments(text: &str) -> Vec<String> {
    text.lines()
        .map(str::trim)
        .take_while(|l| l.is_empty() || l.starts_with('%'))
        .filter(|l| l.starts_with('%'))
        .map(|l| l.trim_start_matches('%').trim().to_string())
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    Dollar(String),
    Quoted(String),
    Punct(&'static str),
}

struct Reader {
    toks: Vec<(Tok, usize, usize)>,
    pos: usize,
}

const PUNCTS: [&str; 17] = [
    "<=>", "<~>", "=>", "<=", "!=", "~|", "~&", "(", ")", "[", "]", ",", ".", ":", "!", "?", "~",
];

fn lex(text: &str) -> Result<Vec<(Tok, usize, usize)>, TptpError> {
    let bytes = text.as_bytes();
    let mut toks = Vec::new();
    let (mut i, mut line, mut col) = (0usize, 1usize, 1usize);
    let err = |line, column, message: &str| TptpError::Syntax {
        line,
        column,
        message: message.to_string(),
    };
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c == '\n' {
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c == '%' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        if text[i..].starts_with("/*") {
            let end = text[i + 2..].find("*/").ok_or_else(|| err(line, col, "unterminated comment"))?;
            for ch in text[i..i + end + 4].chars() {
                if ch == '\n' {
                    line += 1;
                    col = 1;
                } else {
                    col += 1;
                }
            }
            i += end + 4;
            continue;
        }
        let (start_line, start_col) = (line, col);
        if c.is_ascii_alphanumeric() || c == '$' {
            let start = i;
            i += 1;
            while i < bytes.len() && ((bytes[i] as char).is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            let word = &text[start..i];
            col += i - start;
            let tok = if c == '$' {
                Tok::Dollar(word.to_string())
            } else if c.is_ascii_uppercase() {
                Tok::Upper(word.to_string())
            } else {
                Tok::Lower(word.to_string())
            };
            toks.push((tok, start_line, start_col));
            continue;
        }
        if c == '\'' {
            let end = text[i + 1..].find('\'').ok_or_else(|| err(line, col, "unterminated quoted name"))?;
            let word = text[i + 1..i + 1 + end].to_string();
            i += end + 2;
            col += end + 2;
            toks.push((Tok::Quoted(word), start_line, start_col));
            continue;
        }
        if c == '&' || c == '|' || c == '=' {
            let p = match c {
                '&' => "&",
                '|' => "|",
                _ if text[i..].starts_with("=>") => "=>",
                _ => "=",
            };
            i += p.len();
            col += p.len();
            toks.push((Tok::Punct(p), start_line, start_col));
            continue;
        }
        match PUNCTS.iter().find(|p| text[i..].starts_with(**p)) {
            Some(p) => {
                i += p.len();
                col += p.len();
                toks.push((Tok::Punct(p), start_line, start_col));
            }
            None => return Err(err(line, col, &format!("unexpected character `{c}`"))),
        }
    }
    Ok(toks)
}

impl Reader {
    fn new(text: &str) -> Result<Self, TptpError> {
        Ok(Reader { toks: lex(text)?, pos: 0 })
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|t| &t.0)
    }

    fn error(&self, message: &str) -> TptpError {
        let (line, column) = self
            .toks
            .get(self.pos)
            .or_else(|| self.toks.last())
            .map(|t| (t.1, t.2))
            .unwrap_or((1, 1));
        TptpError::Syntax {
            line,
            column,
            message: message.to_string(),
        }
    }

    fn is_punct(&self, p: &str) -> bool {
        matches!(self.peek(), Some(Tok::Punct(q)) if *q == p)
    }

    fn expect(&mut self, p: &str) -> Result<(), TptpError> {
        if self.is_punct(p) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected `{p}`")))
        }
    }

    fn name(&mut self) -> Result<String, TptpError> {
        match self.peek().cloned() {
            Some(Tok::Lower(w)) | Some(Tok::Quoted(w)) | Some(Tok::Upper(w)) => {
                self.pos += 1;
                Ok(w)
            }
            _ => Err(self.error("expected a name")),
        }
    }

    fn statement(&mut self) -> Result<TptpStatement, TptpError> {
        match self.peek() {
            Some(Tok::Lower(w)) if w == "fof" => self.pos += 1,
            _ => return Err(self.error("expected `fof`")),
        }
        self.expect("(")?;
        let name = self.name()?;
        self.expect(",")?;
        let role = self.name()?;
        self.expect(",")?;
        let formula = self.logic_formula()?;
        if self.is_punct(",") {
            self.pos += 1;
            self.skip_balanced()?;
        }
        self.expect(")")?;
        self.expect(".")?;
        Ok(TptpStatement { name, role, formula })
    }

    /// Skips a general term up to (not including) the closing `)` of the
    /// enclosing statement.
    fn skip_balanced(&mut self) -> Result<(), TptpError> {
        let mut depth = 0usize;
        loop {
            match self.peek() {
                None => return Err(self.error("unterminated annotation")),
                Some(Tok::Punct("(")) | Some(Tok::Punct("[")) => depth += 1,
                Some(Tok::Punct(")")) | Some(Tok::Punct("]")) => {
                    if depth == 0 {
                        return Ok(());
                    }
                    depth -= 1;
                }
                _ => {}
            }
            self.pos += 1;
        }
    }

    fn logic_formula(&mut self) -> Result<Formula, TptpError> {
        let first = self.unitary()?;
        match self.peek() {
            Some(Tok::Punct(op @ ("&" | "|"))) => {
                let op = *op;
                let mut parts = vec![first];
                while self.is_punct(op) {
                    self.pos += 1;
                    parts.push(self.unitary()?);
                }
                if matches!(self.peek(), Some(Tok::Punct("&" | "|" | "=>" | "<=>" | "<="))) {
                    return Err(self.error("mixed binary connectives need parentheses"));
                }
                Ok(if op == "&" { Formula::And(parts) } else { Formula::Or(parts) })
            }
            Some(Tok::Punct(op @ ("=>" | "<=>" | "<="))) => {
                let op = *op;
                self.pos += 1;
                let second = self.unitary()?;
                if matches!(self.peek(), Some(Tok::Punct("&" | "|" | "=>" | "<=>" | "<="))) {
                    return Err(self.error("non-associative connective needs parentheses"));
                }
                Ok(match op {
                    "=>" => Formula::implies(first, second),
                    "<=" => Formula::implies(second, first),
                    _ => Formula::iff(first, second),
                })
            }
            _ => Ok(first),
        }
    }

    fn unitary(&mut self) -> Result<Formula, TptpError> {
        match self.peek().cloned() {
            Some(Tok::Punct("(")) => {
                self.pos += 1;
                let f = self.logic_formula()?;
                self.expect(")")?;
                Ok(f)
            }
            Some(Tok::Punct("~")) => {
                self.pos += 1;
                Ok(Formula::not(self.unitary()?))
            }
            Some(Tok::Punct(q @ ("!" | "?"))) => {
                self.pos += 1;
                self.expect("[")?;
                let mut vars = Vec::new();
                loop {
                    match self.peek().cloned() {
                        Some(Tok::Upper(v)) => {
                            self.pos += 1;
                            vars.push(v);
                        }
                        _ => return Err(self.error("expected a variable")),
                    }
                    if self.is_punct(",") {
                        self.pos += 1;
                    } else {
                        break;
                    }
                }
                self.expect("]")?;
                self.expect(":")?;
                let body = self.unitary()?;
                Ok(if q == "!" { Formula::forall(vars, body) } else { Formula::exists(vars, body) })
            }
            Some(Tok::Dollar(w)) if w == "$true" => {
                self.pos += 1;
                Ok(Formula::Verum)
            }
            _ => self.atomic(),
        }
    }

    fn atomic(&mut self) -> Result<Formula, TptpError> {
        let lhs = self.term()?;
        if self.is_punct("=") || self.is_punct("!=") {
            let negated = self.is_punct("!=");
            self.pos += 1;
            let rhs = self.term()?;
            let eq = Formula::Eq(lhs, rhs);
            return Ok(if negated { Formula::not(eq) } else { eq });
        }
        match lhs {
            Term::Const(p) => Ok(Formula::Atom(p, Vec::new())),
            Term::App(p, args) => Ok(Formula::Atom(p, args)),
            Term::Var(_) => Err(self.error("a variable is not a formula")),
        }
    }

    fn term(&mut self) -> Result<Term, TptpError> {
        match self.peek().cloned() {
            Some(Tok::Upper(v)) => {
                self.pos += 1;
                Ok(Term::Var(v))
            }
            Some(Tok::Lower(f)) | Some(Tok::Quoted(f)) => {
                self.pos += 1;
                if self.is_punct("(") {
                    self.pos += 1;
                    let mut args = vec![self.term()?];
                    while self.is_punct(",") {
                        self.pos += 1;
                        args.push(self.term()?);
                    }
                    self.expect(")")?;
                    Ok(Term::App(f, args))
                } else {
                    Ok(Term::Const(f))
                }
            }
            _ => Err(self.error("expected a term")),
        }
    }
}
