use std::collections::BTreeSet;

use super::lexer::{tokenize, Tok, Token};
use super::{
    is_article_name, is_library_reference, Article, FunctorDecl, Item, ItemKind, Justification, ParseError, Proof,
    ProofStep, RefKind, Reference, Reservation,
};
use crate::formula::{is_reserved_symbol, is_symbol_name, is_variable_name, Formula, Signature, SymbolKind, Term};

/// Parses a standalone formula, recording (and checking) symbol arities in
/// `sig`. Free variables are allowed.
pub fn parse_formula(text: &str, sig: &mut Signature) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, pos: 0, sig };
    let f = p.formula()?;
    p.expect_eof()?;
    Ok(f)
}

pub fn parse_article(text: &str) -> Result<Article, ParseError> {
    let toks = tokenize(text)?;
    let mut sig = Signature::new();
    let mut p = Parser {
        toks,
        pos: 0,
        sig: &mut sig,
    };
    p.article()
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    sig: &'a mut Signature,
}

/// Label and variable visibility while walking a proof.
struct Scope {
    visible: Vec<String>,
    all_labels: BTreeSet<String>,
    let_vars: Vec<String>,
}

impl Parser<'_> {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        let i = (self.pos + k).min(self.toks.len() - 1);
        &self.toks[i].tok
    }

    fn here(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn syntax(&self, message: impl Into<String>) -> ParseError {
        let t = self.here();
        ParseError::Syntax {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn invalid_at(t: &Token, message: impl Into<String>) -> ParseError {
        ParseError::Invalid {
            line: t.line,
            column: t.column,
            message: message.into(),
        }
    }

    fn eat_punct(&mut self, p: &str) -> bool {
        if matches!(self.peek(), Tok::Punct(q) if *q == p) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn eat_keyword(&mut self, k: &str) -> bool {
        if matches!(self.peek(), Tok::Keyword(q) if *q == k) {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect_punct(&mut self, p: &str) -> Result<(), ParseError> {
        if self.eat_punct(p) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{p}`, found {}", self.peek().describe())))
        }
    }

    fn expect_keyword(&mut self, k: &str) -> Result<(), ParseError> {
        if self.eat_keyword(k) {
            Ok(())
        } else {
            Err(self.syntax(format!("expected `{k}`, found {}", self.peek().describe())))
        }
    }

    fn expect_eof(&self) -> Result<(), ParseError> {
        match self.peek() {
            Tok::Eof => Ok(()),
            other => Err(self.syntax(format!("unexpected {}", other.describe()))),
        }
    }

    fn ident(&mut self, what: &str) -> Result<(String, Token), ParseError> {
        match self.peek().clone() {
            Tok::Ident(s) => Ok((s, self.bump())),
            other => Err(self.syntax(format!("expected {what}, found {}", other.describe()))),
        }
    }

    fn variable(&mut self) -> Result<(String, Token), ParseError> {
        let (name, tok) = self.ident("a variable")?;
        if !is_variable_name(&name) {
            return Err(Self::invalid_at(&tok, format!("`{name}` is not a variable name")));
        }
        Ok((name, tok))
    }

    fn symbol(&mut self, what: &str) -> Result<(String, Token), ParseError> {
        let (name, tok) = self.ident(what)?;
        check_symbol(&name, &tok)?;
        Ok((name, tok))
    }

    fn record(&mut self, name: &str, kind: SymbolKind, arity: usize, at: &Token) -> Result<(), ParseError> {
        self.sig.record(name, kind, arity).map_err(|source| ParseError::Signature {
            line: at.line,
            column: at.column,
            source,
        })
    }

    // ---- formulas -------------------------------------------------------

    fn formula(&mut self) -> Result<Formula, ParseError> {
        if matches!(self.peek(), Tok::Keyword("for") | Tok::Keyword("ex")) {
            return self.quantified();
        }
        let lhs = self.implication()?;
        if self.eat_keyword("iff") {
            let rhs = self.implication()?;
            if matches!(self.peek(), Tok::Keyword("iff")) {
                return Err(self.syntax("`iff` does not associate; add parentheses"));
            }
            return Ok(Formula::iff(lhs, rhs));
        }
        Ok(lhs)
    }

    fn quantified(&mut self) -> Result<Formula, ParseError> {
        let universal = matches!(self.bump().tok, Tok::Keyword("for"));
        let mut vars = vec![self.variable()?.0];
        while self.eat_punct(",") {
            vars.push(self.variable()?.0);
        }
        if universal {
            self.expect_keyword("holds")?;
        } else {
            self.expect_keyword("st")?;
        }
        let body = self.formula()?;
        Ok(if universal {
            Formula::forall(vars, body)
        } else {
            Formula::exists(vars, body)
        })
    }

    fn implication(&mut self) -> Result<Formula, ParseError> {
        let lhs = self.disjunction()?;
        if self.eat_keyword("implies") {
            let rhs = if matches!(self.peek(), Tok::Keyword("for") | Tok::Keyword("ex")) {
                self.quantified()?
            } else {
                self.implication()?
            };
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.conjunction()?];
        while self.eat_keyword("or") {
            parts.push(self.conjunction()?);
        }
        Ok(Formula::or(parts))
    }

    fn conjunction(&mut self) -> Result<Formula, ParseError> {
        let mut parts = vec![self.unary()?];
        while self.eat_punct("&") {
            parts.push(self.unary()?);
        }
        Ok(Formula::and(parts))
    }

    fn unary(&mut self) -> Result<Formula, ParseError> {
        match self.peek() {
            Tok::Keyword("not") => {
                self.bump();
                Ok(Formula::not(self.unary()?))
            }
            Tok::Keyword("for") | Tok::Keyword("ex") => self.quantified(),
            Tok::Punct("(") => {
                self.bump();
                let f = self.formula()?;
                self.expect_punct(")")?;
                Ok(f)
            }
            _ => self.atomic(),
        }
    }

    fn atomic(&mut self) -> Result<Formula, ParseError> {
        let (name, tok) = self.ident("a formula")?;
        if is_variable_name(&name) {
            self.expect_punct("=")?;
            let rhs = self.term()?;
            return Ok(Formula::Eq(Term::Var(name), rhs));
        }
        check_symbol(&name, &tok)?;
        let args = if matches!(self.peek(), Tok::Punct("(")) {
            self.args()?
        } else {
            Vec::new()
        };
        if self.eat_punct("=") {
            let lhs = self.finish_term(name, args, &tok)?;
            let rhs = self.term()?;
            return Ok(Formula::Eq(lhs, rhs));
        }
        self.record(&name, SymbolKind::Predicate, args.len(), &tok)?;
        Ok(Formula::Atom(name, args))
    }

    fn args(&mut self) -> Result<Vec<Term>, ParseError> {
        self.expect_punct("(")?;
        let mut args = vec![self.term()?];
        while self.eat_punct(",") {
            args.push(self.term()?);
        }
        self.expect_punct(")")?;
        Ok(args)
    }

    fn term(&mut self) -> Result<Term, ParseError> {
        let (name, tok) = self.ident("a term")?;
        if is_variable_name(&name) {
            return Ok(Term::Var(name));
        }
        check_symbol(&name, &tok)?;
        let args = if matches!(self.peek(), Tok::Punct("(")) {
            self.args()?
        } else {
            Vec::new()
        };
        self.finish_term(name, args, &tok)
    }

    fn finish_term(&mut self, name: String, args: Vec<Term>, tok: &Token) -> Result<Term, ParseError> {
        self.record(&name, SymbolKind::Functor, args.len(), tok)?;
        Ok(if args.is_empty() {
            Term::Const(name)
        } else {
            Term::App(name, args)
        })
    }

    // ---- articles -------------------------------------------------------

    fn article(&mut self) -> Result<Article, ParseError> {
        self.expect_keyword("article")?;
        let (name, tok) = self.ident("an article name")?;
        if !is_article_name(&name) {
            return Err(Self::invalid_at(&tok, format!("article name `{name}` must match [a-z][a-z0-9_]*")));
        }
        self.expect_punct(";")?;
        let mut article = Article {
            name,
            reservations: Vec::new(),
            functors: Vec::new(),
            items: Vec::new(),
        };
        let mut scope = Scope {
            visible: Vec::new(),
            all_labels: BTreeSet::new(),
            let_vars: Vec::new(),
        };
        loop {
            match self.peek().clone() {
                Tok::Eof => break,
                Tok::Keyword("reserve") => self.reserve(&mut article)?,
                Tok::Keyword("func") => self.func(&mut article)?,
                Tok::Keyword("definition") => self.item(&mut article, ItemKind::Definition, &mut scope)?,
                Tok::Keyword("theorem") => self.item(&mut article, ItemKind::Theorem, &mut scope)?,
                other => {
                    return Err(self.syntax(format!(
                        "expected `reserve`, `func`, `definition` or `theorem`, found {}",
                        other.describe()
                    )))
                }
            }
        }
        Ok(article)
    }

    fn reserve(&mut self, article: &mut Article) -> Result<(), ParseError> {
        self.bump();
        let mut vars = vec![self.variable()?];
        while self.eat_punct(",") {
            vars.push(self.variable()?);
        }
        self.expect_keyword("for")?;
        let (ty, ty_tok) = self.symbol("a type name")?;
        self.record(&ty, SymbolKind::Predicate, 1, &ty_tok)?;
        self.expect_punct(";")?;
        for (var, tok) in vars {
            if article.reserved_type(&var).is_some() {
                return Err(Self::invalid_at(&tok, format!("variable `{var}` is already reserved")));
            }
            article.reservations.push(Reservation {
                var,
                type_pred: ty.clone(),
            });
        }
        Ok(())
    }

    fn func(&mut self, article: &mut Article) -> Result<(), ParseError> {
        self.bump();
        let (name, tok) = self.symbol("a functor name")?;
        if article.functor(&name).is_some() {
            return Err(Self::invalid_at(&tok, format!("functor `{name}` is already declared")));
        }
        self.expect_punct("(")?;
        let mut params: Vec<String> = Vec::new();
        if !self.eat_punct(")") {
            loop {
                let (v, vtok) = self.variable()?;
                if params.contains(&v) {
                    return Err(Self::invalid_at(&vtok, format!("parameter `{v}` repeated")));
                }
                params.push(v);
                if self.eat_punct(")") {
                    break;
                }
                self.expect_punct(",")?;
            }
        }
        self.expect_punct("->")?;
        let (ty, ty_tok) = self.symbol("a result type")?;
        self.expect_punct(";")?;
        self.record(&name, SymbolKind::Functor, params.len(), &tok)?;
        self.record(&ty, SymbolKind::Predicate, 1, &ty_tok)?;
        let ordinal = article.functors.len() + 1;
        article.functors.push(FunctorDecl {
            name,
            params,
            result_type: ty,
            ordinal,
        });
        Ok(())
    }

    fn claim_label(scope: &mut Scope, label: &str, tok: &Token) -> Result<(), ParseError> {
        if !scope.all_labels.insert(label.to_string()) {
            return Err(ParseError::DuplicateLabel {
                line: tok.line,
                column: tok.column,
                label: label.to_string(),
            });
        }
        Ok(())
    }

    fn item(&mut self, article: &mut Article, kind: ItemKind, scope: &mut Scope) -> Result<(), ParseError> {
        let kw = self.bump();
        let (label, label_tok) = self.ident("a label")?;
        Self::claim_label(scope, &label, &label_tok)?;
        self.expect_punct(":")?;
        let f_tok = self.here().clone();
        let formula = self.formula()?;
        let free = formula.free_vars();
        if let Some(v) = free.iter().next() {
            return Err(Self::invalid_at(&f_tok, format!("unbound variable `{v}` in `{label}`")));
        }
        let proof = if self.eat_punct(";") {
            None
        } else if matches!(self.peek(), Tok::Keyword("proof")) {
            if kind == ItemKind::Definition {
                return Err(Self::invalid_at(&kw, "definitions cannot have proofs"));
            }
            let mark = scope.visible.len();
            let p = self.proof(article, scope)?;
            scope.visible.truncate(mark);
            Some(p)
        } else {
            return Err(self.syntax(format!("expected `;` or `proof`, found {}", self.peek().describe())));
        };
        let ordinal = article.items.iter().filter(|i| i.kind == kind).count() + 1;
        article.items.push(Item {
            kind,
            label: label.clone(),
            ordinal,
            formula,
            proof,
        });
        scope.visible.push(label);
        Ok(())
    }

    fn proof(&mut self, article: &Article, scope: &mut Scope) -> Result<Proof, ParseError> {
        self.expect_keyword("proof")?;
        let label_mark = scope.visible.len();
        let var_mark = scope.let_vars.len();
        let mut steps = Vec::new();
        while !self.eat_keyword("end") {
            steps.push(self.step(article, scope)?);
        }
        self.expect_punct(";")?;
        scope.visible.truncate(label_mark);
        scope.let_vars.truncate(var_mark);
        Ok(Proof { steps })
    }

    fn step_formula(&mut self, scope: &Scope) -> Result<Formula, ParseError> {
        let tok = self.here().clone();
        let f = self.formula()?;
        if let Some(v) = f.free_vars().iter().find(|v| !scope.let_vars.contains(v)) {
            return Err(Self::invalid_at(&tok, format!("unbound variable `{v}`")));
        }
        Ok(f)
    }

    fn step(&mut self, article: &Article, scope: &mut Scope) -> Result<ProofStep, ParseError> {
        match self.peek().clone() {
            Tok::Keyword("let") => {
                self.bump();
                let mut vars = Vec::new();
                loop {
                    let (v, tok) = self.variable()?;
                    if article.reserved_type(&v).is_none() {
                        return Err(Self::invalid_at(&tok, format!("`let {v}` needs a reservation for `{v}`")));
                    }
                    if scope.let_vars.contains(&v) || vars.contains(&v) {
                        return Err(Self::invalid_at(&tok, format!("`{v}` is already introduced")));
                    }
                    vars.push(v);
                    if !self.eat_punct(",") {
                        break;
                    }
                }
                self.expect_punct(";")?;
                scope.let_vars.extend(vars.iter().cloned());
                Ok(ProofStep::Let { vars })
            }
            Tok::Keyword("assume") => {
                self.bump();
                let label = if matches!(self.peek_at(1), Tok::Punct(":")) {
                    let (l, tok) = self.ident("a label")?;
                    Self::claim_label(scope, &l, &tok)?;
                    self.bump();
                    Some(l)
                } else {
                    None
                };
                let formula = self.step_formula(scope)?;
                self.expect_punct(";")?;
                if let Some(l) = &label {
                    scope.visible.push(l.clone());
                }
                Ok(ProofStep::Assume { label, formula })
            }
            Tok::Keyword("thus") => {
                self.bump();
                let formula = self.step_formula(scope)?;
                let just = self.justification(article, scope)?;
                Ok(ProofStep::Thus { formula, just })
            }
            Tok::Ident(_) if matches!(self.peek_at(1), Tok::Punct(":")) => {
                let (label, tok) = self.ident("a label")?;
                Self::claim_label(scope, &label, &tok)?;
                self.bump();
                let formula = self.step_formula(scope)?;
                let just = self.justification(article, scope)?;
                scope.visible.push(label.clone());
                Ok(ProofStep::Aux { label, formula, just })
            }
            other => Err(self.syntax(format!(
                "expected `let`, `assume`, `thus`, a labeled step or `end`, found {}",
                other.describe()
            ))),
        }
    }

    fn justification(&mut self, article: &Article, scope: &mut Scope) -> Result<Justification, ParseError> {
        if self.eat_keyword("by") {
            let mut refs = Vec::new();
            loop {
                let (name, tok) = self.ident("a reference")?;
                let kind = if scope.visible.contains(&name) {
                    RefKind::Local
                } else if is_library_reference(&name) {
                    RefKind::Library
                } else {
                    return Err(ParseError::UnknownReference {
                        line: tok.line,
                        column: tok.column,
                        name,
                    });
                };
                refs.push(Reference { name, kind });
                if !self.eat_punct(",") {
                    break;
                }
            }
            self.expect_punct(";")?;
            return Ok(Justification::By(refs));
        }
        if matches!(self.peek(), Tok::Keyword("proof")) {
            let p = self.proof(article, scope)?;
            self.eat_punct(";");
            return Ok(Justification::Proof(p));
        }
        Err(self.syntax(format!("expected `by` or `proof`, found {}", self.peek().describe())))
    }
}

fn check_symbol(name: &str, tok: &Token) -> Result<(), ParseError> {
    if !is_symbol_name(name) {
        return Err(Parser::invalid_at(tok, format!("`{name}` is not a symbol name")));
    }
    if is_reserved_symbol(name) {
        return Err(Parser::invalid_at(tok, format!("`{name}` uses a prefix reserved for Skolem symbols")));
    }
    Ok(())
}
