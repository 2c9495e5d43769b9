use thiserror::Error;

use super::{ExportKind, ExportedItem, MptpName};
use crate::article::{Article, ItemKind};
use crate::formula::{Formula, Term};
use crate::verifier::{ItemStatus, VerificationReport};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExportError {
    #[error("items failed verification: {}", .0.join(", "))]
    Unverified(Vec<String>),
    #[error("report is for article `{report}`, not `{article}`")]
    WrongReport { article: String, report: String },
}

/// MPTP name of a theorem or definition.
pub fn item_name(article: &Article, kind: ItemKind, ordinal: usize) -> String {
    let article = article.name.clone();
    match kind {
        ItemKind::Theorem => MptpName::Theorem { ordinal, article },
        ItemKind::Definition => MptpName::Definition { ordinal, article },
    }
    .to_string()
}

/// Type axioms of the functors declared in `article`.
pub fn functor_type_axioms(article: &Article) -> Vec<ExportedItem> {
    article
        .functors
        .iter()
        .map(|f| {
            let args: Vec<Term> = f.params.iter().map(|p| Term::Var(p.clone())).collect();
            let value = if args.is_empty() {
                Term::Const(f.name.clone())
            } else {
                Term::App(f.name.clone(), args)
            };
            let claim = Formula::atom(f.result_type.clone(), vec![value]);
            let guards: Vec<Formula> = f
                .params
                .iter()
                .filter_map(|p| article.reserved_type(p).map(|t| Formula::atom(t, vec![Term::Var(p.clone())])))
                .collect();
            let body = if guards.is_empty() {
                claim
            } else {
                Formula::implies(Formula::and(guards), claim)
            };
            let formula = if f.params.is_empty() {
                body
            } else {
                Formula::forall(f.params.clone(), body)
            };
            let name = MptpName::FunctorType {
                ordinal: f.ordinal,
                article: article.name.clone(),
            };
            ExportedItem::new(name.to_string(), ExportKind::FunctorType, &article.name, &f.name, formula).typing(&f.name)
        })
        .collect()
}

/// Every theorem and definition under its MPTP name, with reserved-variable
/// guards made explicit, followed by the functor type axioms.
pub fn export_items(article: &Article) -> Vec<ExportedItem> {
    let mut out: Vec<ExportedItem> = article
        .items
        .iter()
        .map(|i| {
            let kind = match i.kind {
                ItemKind::Theorem => ExportKind::Theorem,
                ItemKind::Definition => ExportKind::Definition,
            };
            ExportedItem::new(
                item_name(article, i.kind, i.ordinal),
                kind,
                &article.name,
                &i.label,
                article.elaborate(&i.formula),
            )
        })
        .collect();
    out.extend(functor_type_axioms(article));
    out
}

/// Exports a verified article. Items that failed verification block the
/// export unless `force` is set; unproved theorems do not.
pub fn export_article(
    article: &Article,
    report: &VerificationReport,
    force: bool,
) -> Result<Vec<ExportedItem>, ExportError> {
    if report.article != article.name {
        return Err(ExportError::WrongReport {
            article: article.name.clone(),
            report: report.article.clone(),
        });
    }
    let failed: Vec<String> = report
        .items
        .iter()
        .filter(|i| i.status == ItemStatus::Failed)
        .map(|i| i.label.clone())
        .collect();
    if !force && (!failed.is_empty() || !report.errors.is_empty()) {
        let mut all = report.errors.clone();
        all.extend(failed);
        return Err(ExportError::Unverified(all));
    }
    Ok(export_items(article))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::article::parse_article;
    use crate::formula::tptp::{serialize_tptp, Role};

    #[test]
    fn functor_type_axiom_layout() {
        let a = parse_article("article mtest1; reserve X for set; func relincl(X) -> relation;").unwrap();
        let dts = functor_type_axioms(&a);
        assert_eq!(dts.len(), 1);
        assert_eq!(dts[0].name, "dt_k1_mtest1");
        assert_eq!(
            serialize_tptp(&dts[0].name, Role::Axiom, &dts[0].formula).unwrap(),
            "fof(dt_k1_mtest1, axiom, ! [X] : (set(X) => relation(relincl(X))))."
        );
    }

    #[test]
    fn constants_and_unreserved_parameters() {
        let a = parse_article("article b; func e() -> set; func pair(A, B) -> set;").unwrap();
        let dts = functor_type_axioms(&a);
        assert_eq!(dts[0].formula, Formula::atom("set", vec![Term::constant("e")]));
        assert!(matches!(dts[1].formula, Formula::Forall(ref vs, _) if vs.len() == 2));
    }

    #[test]
    fn no_functors_no_type_axioms() {
        let a = parse_article("article c; theorem t1: p;").unwrap();
        assert!(functor_type_axioms(&a).is_empty());
    }

    #[test]
    fn theorem_names_use_ordinals() {
        let a = parse_article("article mtest1; definition d1: p; theorem t1: p; theorem t2: p;").unwrap();
        let names: Vec<String> = export_items(&a).into_iter().map(|i| i.name).collect();
        assert_eq!(names, vec!["d1_mtest1", "t1_mtest1", "t2_mtest1"]);
    }
}
