//! Render model: the pretty-printed article with every identifier annotated
//! by symbol kind and declaration anchor, and every step by its obligation,
//! status and thesis.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::{formula_to_mfl, pretty_print, tokenize, Article, ItemKind, Justification, Proof, Tok, Token};
use crate::formula::is_variable_name;
use crate::problem::LibraryStore;
use crate::verifier::{ItemStatus, StepStatus, VerificationReport};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpanKind {
    Article,
    Variable,
    TypePredicate,
    Predicate,
    Functor,
    ItemLabel,
    StepLabel,
    LocalReference,
    LibraryReference,
    /// The `by` keyword of a justification.
    By,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    /// Byte range in `RenderModel::text`.
    pub start: usize,
    pub end: usize,
    pub line: usize,
    pub column: usize,
    pub text: String,
    pub kind: SpanKind,
    /// `#func-<name>`, `#item-<label>`, `#step-<label>`, `#reserve-<var>`
    /// or `/library/<name>`.
    pub anchor: Option<String>,
    /// True at the declaration site the anchor points to.
    pub declares: bool,
    pub obligation: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderStep {
    pub index: usize,
    pub depth: usize,
    pub kind: String,
    pub label: Option<String>,
    pub obligation: Option<String>,
    pub status: Option<StepStatus>,
    pub thesis_after: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderItem {
    pub label: String,
    pub kind: ItemKind,
    pub mptp_name: String,
    pub anchor: String,
    pub status: Option<ItemStatus>,
    pub errors: Vec<String>,
    /// The item's statement; the initial thesis of a theorem.
    pub thesis: String,
    pub steps: Vec<RenderStep>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RenderModel {
    pub article: String,
    pub text: String,
    pub spans: Vec<Span>,
    pub items: Vec<RenderItem>,
}

impl RenderModel {
    /// Spans of `by` keywords that carry an obligation.
    pub fn clickable(&self) -> impl Iterator<Item = &Span> {
        self.spans.iter().filter(|s| s.kind == SpanKind::By && s.obligation.is_some())
    }
}

fn by_steps(p: &Proof, flat: &mut usize, out: &mut Vec<usize>) {
    for s in &p.steps {
        *flat += 1;
        match s.justification() {
            Some(Justification::By(_)) => out.push(*flat),
            Some(Justification::Proof(sub)) => by_steps(sub, flat, out),
            None => {}
        }
    }
}

fn step_labels(p: &Proof, out: &mut BTreeSet<String>) {
    for s in &p.steps {
        if let Some(l) = s.label() {
            out.insert(l.to_string());
        }
        if let Some(Justification::Proof(sub)) = s.justification() {
            step_labels(sub, out);
        }
    }
}

fn matching_paren(toks: &[Token], open: usize) -> Option<usize> {
    let mut depth = 0usize;
    for (j, t) in toks.iter().enumerate().skip(open) {
        match t.tok {
            Tok::Punct("(") => depth += 1,
            Tok::Punct(")") => {
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

struct Classifier<'a> {
    article: &'a Article,
    lib: &'a LibraryStore,
    item_labels: BTreeSet<String>,
    step_labels: BTreeSet<String>,
    types: BTreeSet<String>,
}

impl Classifier<'_> {
    fn variable(&self, name: &str) -> (SpanKind, Option<String>) {
        let anchor = self.article.reserved_type(name).map(|_| format!("#reserve-{name}"));
        (SpanKind::Variable, anchor)
    }

    fn functor(&self, name: &str) -> (SpanKind, Option<String>) {
        let anchor = if self.article.functor(name).is_some() {
            Some(format!("#func-{name}"))
        } else {
            self.lib.functor_type(name).map(|dt| format!("/library/{}", dt.name))
        };
        (SpanKind::Functor, anchor)
    }

    fn reference(&self, name: &str) -> (SpanKind, Option<String>) {
        if self.step_labels.contains(name) {
            (SpanKind::LocalReference, Some(format!("#step-{name}")))
        } else if self.item_labels.contains(name) {
            (SpanKind::LocalReference, Some(format!("#item-{name}")))
        } else {
            (SpanKind::LibraryReference, Some(format!("/library/{name}")))
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Ctx {
    None,
    Reserve { after_for: bool },
    Func { seen_name: bool, after_arrow: bool },
    Let,
    Formula,
    By,
}

/// Builds the render model of `a` from its verification report.
pub fn render_model(a: &Article, report: Option<&VerificationReport>, lib: &LibraryStore) -> RenderModel {
    let text = pretty_print(a);
    let toks = tokenize(&text).expect("printed articles lex");
    let mut labels = BTreeSet::new();
    let mut by_sites: Vec<(String, usize)> = Vec::new();
    for i in &a.items {
        if let Some(p) = &i.proof {
            step_labels(p, &mut labels);
            let mut flat = 0;
            let mut sites = Vec::new();
            by_steps(p, &mut flat, &mut sites);
            by_sites.extend(sites.into_iter().map(|s| (i.label.clone(), s)));
        }
    }
    let mut types: BTreeSet<String> = a.reservations.iter().map(|r| r.type_pred.clone()).collect();
    types.extend(a.functors.iter().map(|f| f.result_type.clone()));
    let cls = Classifier {
        article: a,
        lib,
        item_labels: a.items.iter().map(|i| i.label.clone()).collect(),
        step_labels: labels,
        types,
    };
    let step_obligation = |item: &str, index: usize| -> Option<String> {
        report?
            .item(item)?
            .steps
            .iter()
            .find(|s| s.index == index)?
            .obligation
            .clone()
    };

    let mut spans = Vec::new();
    let mut ctx = Ctx::None;
    let mut parens: Vec<bool> = Vec::new();
    let mut next_by = 0usize;
    for (i, t) in toks.iter().enumerate() {
        let prev = i.checked_sub(1).map(|j| &toks[j].tok);
        let next = toks.get(i + 1).map(|t| &t.tok);
        let mut push = |kind: SpanKind, anchor: Option<String>, declares: bool, obligation: Option<String>| {
            spans.push(Span {
                start: t.start,
                end: t.end,
                line: t.line,
                column: t.column,
                text: text[t.start..t.end].to_string(),
                kind,
                anchor,
                declares,
                obligation,
            })
        };
        match &t.tok {
            Tok::Keyword("reserve") => ctx = Ctx::Reserve { after_for: false },
            Tok::Keyword("for") if matches!(ctx, Ctx::Reserve { .. }) => ctx = Ctx::Reserve { after_for: true },
            Tok::Keyword("func") => {
                ctx = Ctx::Func {
                    seen_name: false,
                    after_arrow: false,
                }
            }
            Tok::Punct("->") => {
                if let Ctx::Func { seen_name, .. } = ctx {
                    ctx = Ctx::Func {
                        seen_name,
                        after_arrow: true,
                    };
                }
            }
            Tok::Keyword("let") => ctx = Ctx::Let,
            Tok::Keyword("assume") | Tok::Keyword("thus") => ctx = Ctx::Formula,
            Tok::Punct(":") => ctx = Ctx::Formula,
            Tok::Keyword("by") => {
                let obligation = by_sites
                    .get(next_by)
                    .and_then(|(item, index)| step_obligation(item, *index));
                next_by += 1;
                push(SpanKind::By, None, false, obligation);
                ctx = Ctx::By;
            }
            Tok::Punct(";") | Tok::Keyword("proof") | Tok::Keyword("end") => {
                ctx = Ctx::None;
                parens.clear();
            }
            Tok::Punct("(") => parens.push(matches!(prev, Some(Tok::Ident(_)))),
            Tok::Punct(")") => {
                parens.pop();
            }
            Tok::Ident(name) => {
                if next == Some(&Tok::Punct(":")) {
                    if matches!(prev, Some(Tok::Keyword("definition")) | Some(Tok::Keyword("theorem"))) {
                        push(SpanKind::ItemLabel, Some(format!("#item-{name}")), true, None);
                    } else {
                        push(SpanKind::StepLabel, Some(format!("#step-{name}")), true, None);
                    }
                    continue;
                }
                if prev == Some(&Tok::Keyword("article")) {
                    push(SpanKind::Article, None, false, None);
                    continue;
                }
                match ctx {
                    Ctx::Reserve { after_for: false } | Ctx::Let => {
                        let (k, anchor) = cls.variable(name);
                        let declares = matches!(ctx, Ctx::Reserve { .. });
                        push(k, anchor, declares, None);
                    }
                    Ctx::Reserve { after_for: true } => push(SpanKind::TypePredicate, None, false, None),
                    Ctx::Func { seen_name: false, .. } => {
                        ctx = Ctx::Func {
                            seen_name: true,
                            after_arrow: false,
                        };
                        push(SpanKind::Functor, Some(format!("#func-{name}")), true, None);
                    }
                    Ctx::Func { after_arrow: true, .. } => push(SpanKind::TypePredicate, None, false, None),
                    Ctx::Func { .. } => {
                        let (k, anchor) = cls.variable(name);
                        push(k, anchor, false, None);
                    }
                    Ctx::By => {
                        let (k, anchor) = cls.reference(name);
                        push(k, anchor, false, None);
                    }
                    Ctx::Formula | Ctx::None => {
                        if is_variable_name(name) {
                            let (k, anchor) = cls.variable(name);
                            push(k, anchor, false, None);
                            continue;
                        }
                        let in_term = parens.iter().any(|&app| app)
                            || prev == Some(&Tok::Punct("="))
                            || next == Some(&Tok::Punct("="))
                            || (next == Some(&Tok::Punct("("))
                                && matching_paren(&toks, i + 1)
                                    .and_then(|j| toks.get(j + 1))
                                    .is_some_and(|t| t.tok == Tok::Punct("=")));
                        if in_term {
                            let (k, anchor) = cls.functor(name);
                            push(k, anchor, false, None);
                        } else if cls.types.contains(name.as_str()) {
                            push(SpanKind::TypePredicate, None, false, None);
                        } else {
                            push(SpanKind::Predicate, None, false, None);
                        }
                    }
                }
            }
            _ => {}
        }
    }

    let statuses: BTreeMap<&str, _> = report
        .map(|r| r.items.iter().map(|i| (i.label.as_str(), i)).collect())
        .unwrap_or_default();
    let items = a
        .items
        .iter()
        .map(|i| {
            let rep = statuses.get(i.label.as_str());
            RenderItem {
                label: i.label.clone(),
                kind: i.kind,
                mptp_name: crate::problem::item_name(a, i.kind, i.ordinal),
                anchor: format!("item-{}", i.label),
                status: rep.map(|r| r.status),
                errors: rep.map(|r| r.errors.clone()).unwrap_or_default(),
                thesis: formula_to_mfl(&i.formula),
                steps: rep
                    .map(|r| {
                        r.steps
                            .iter()
                            .map(|s| RenderStep {
                                index: s.index,
                                depth: s.depth,
                                kind: s.kind.clone(),
                                label: s.label.clone(),
                                obligation: s.obligation.clone(),
                                status: s.status.clone(),
                                thesis_after: formula_to_mfl(&s.thesis_after),
                            })
                            .collect()
                    })
                    .unwrap_or_default(),
            }
        })
        .collect();
    RenderModel {
        article: a.name.clone(),
        text,
        spans,
        items,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::article::parse_article;
    use crate::verifier::verify_article;

    const MTEST1: &str = "article mtest1; reserve R for relation; reserve X for set;
func relincl(X) -> relation;
definition d1: for X holds wellorder(relincl(X));
theorem t1: for R holds R = R;
theorem t2: for X holds wellorder(relincl(X))
proof let X; assume a1: set(X); thus wellorder(relincl(X)) by d1; end;";

    fn model() -> RenderModel {
        let a = parse_article(MTEST1).unwrap();
        let lib = LibraryStore::new();
        let r = verify_article(&a, &lib, 1);
        render_model(&a, Some(&r), &lib)
    }

    #[test]
    fn functor_occurrences_link_to_declaration() {
        let m = model();
        let uses: Vec<&Span> = m.spans.iter().filter(|s| s.text == "relincl").collect();
        assert_eq!(uses.len(), 4);
        assert!(uses.iter().all(|s| s.kind == SpanKind::Functor && s.anchor.as_deref() == Some("#func-relincl")));
        assert!(uses[0].declares);
        let wo = m.spans.iter().find(|s| s.text == "wellorder").unwrap();
        assert_eq!(wo.kind, SpanKind::Predicate);
    }

    #[test]
    fn one_clickable_by() {
        let m = model();
        let by: Vec<&Span> = m.clickable().collect();
        assert_eq!(by.len(), 1);
        assert_eq!(by[0].obligation.as_deref(), Some("e2_2__mtest1"));
        let d1 = m.spans.iter().rfind(|s| s.text == "d1").unwrap();
        assert_eq!(d1.kind, SpanKind::LocalReference);
        assert_eq!(d1.anchor.as_deref(), Some("#item-d1"));
    }

    #[test]
    fn every_identifier_is_annotated() {
        let m = model();
        let idents: Vec<(usize, usize)> = tokenize(&m.text)
            .unwrap()
            .into_iter()
            .filter(|t| matches!(t.tok, Tok::Ident(_)))
            .map(|t| (t.start, t.end))
            .collect();
        let spans: Vec<(usize, usize)> = m
            .spans
            .iter()
            .filter(|s| s.kind != SpanKind::By)
            .map(|s| (s.start, s.end))
            .collect();
        assert_eq!(idents, spans);
    }

    #[test]
    fn steps_carry_thesis() {
        let m = model();
        let t2 = m.items.iter().find(|i| i.label == "t2").unwrap();
        assert_eq!(t2.steps.len(), 3);
        assert_eq!(t2.steps[0].thesis_after, "set(c1) implies wellorder(relincl(c1))");
        assert_eq!(t2.steps[2].thesis_after, "verum");
        assert_eq!(t2.steps[2].status, Some(StepStatus::Verified));
        let t1 = m.items.iter().find(|i| i.label == "t1").unwrap();
        assert!(t1.steps.is_empty());
        assert_eq!(t1.thesis, "for R holds R = R");
    }

    #[test]
    fn failed_status_passes_through() {
        let a = parse_article("article a; definition d1: p; theorem t1: q proof thus q by d1; end;").unwrap();
        let lib = LibraryStore::new();
        let r = verify_article(&a, &lib, 1);
        let m = render_model(&a, Some(&r), &lib);
        assert_eq!(m.items[1].steps[0].status, Some(StepStatus::Countersatisfiable));
    }
}
