//! Proof-skeleton checking, obligation extraction and the bounded
//! "obvious inference" checker.

mod thesis;

use std::collections::{BTreeMap, BTreeSet};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::thread;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::article::{formula_to_mfl, Article, Item, ItemKind, Justification, Proof, ProofStep, RefKind};
use crate::formula::{Formula, NamedFormula};
use crate::problem::{
    export_items, functor_type_axioms, generate_problem, ExportKind, ExportedItem, GenerationError, LibraryStore,
    MptpName,
};
use crate::prover::{prove_formulas, Limits, RunResult, SzsStatus};

pub use thesis::{step_thesis, ConstantSupply, ScopeConstant, SkeletonError, Thesis};

/// Limits of the obviousness checker.
pub type CheckLimits = Limits;

/// One `by`-justified inference.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Obligation {
    /// `e<K>_<item ordinal>__<article>`.
    pub id: String,
    pub article: String,
    /// Label of the enclosing theorem.
    pub item: String,
    pub item_ordinal: usize,
    /// 1-based index of the step in the flattened proof.
    pub step: usize,
    /// The e-ordinal K.
    pub ordinal: usize,
    pub conjecture: Formula,
    pub explicit_refs: Vec<ExportedItem>,
    pub scope: Vec<ScopeConstant>,
}

impl Obligation {
    pub fn origin(&self) -> String {
        format!("{}:{}", self.item, self.step)
    }

    pub fn ref_names(&self) -> Vec<String> {
        self.explicit_refs.iter().map(|r| r.name.clone()).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "snake_case")]
pub enum StepStatus {
    Verified,
    Countersatisfiable,
    #[serde(rename = "gaveup")]
    GaveUp,
    SkeletonError(String),
}

impl StepStatus {
    pub fn name(&self) -> &'static str {
        match self {
            StepStatus::Verified => "verified",
            StepStatus::Countersatisfiable => "countersatisfiable",
            StepStatus::GaveUp => "gaveup",
            StepStatus::SkeletonError(_) => "skeleton_error",
        }
    }

    pub fn from_szs(s: &SzsStatus) -> StepStatus {
        match s {
            SzsStatus::Theorem => StepStatus::Verified,
            SzsStatus::CounterSatisfiable => StepStatus::Countersatisfiable,
            _ => StepStatus::GaveUp,
        }
    }

    pub fn is_verified(&self) -> bool {
        *self == StepStatus::Verified
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ItemStatus {
    Verified,
    /// A theorem stated without proof.
    Unproved,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StepReport {
    pub index: usize,
    pub depth: usize,
    pub kind: String,
    pub label: Option<String>,
    pub obligation: Option<String>,
    pub status: Option<StepStatus>,
    pub thesis_after: Formula,
    pub millis: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ItemReport {
    pub label: String,
    pub kind: ItemKind,
    pub ordinal: usize,
    pub mptp_name: String,
    pub status: ItemStatus,
    pub errors: Vec<String>,
    pub steps: Vec<StepReport>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObligationReport {
    pub id: String,
    pub item: String,
    pub step: usize,
    pub status: StepStatus,
    pub millis: u64,
    pub conjecture: Formula,
    pub refs: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub article: String,
    pub errors: Vec<String>,
    pub items: Vec<ItemReport>,
    pub obligations: Vec<ObligationReport>,
}

impl VerificationReport {
    /// Obligation and step statuses keyed by obligation id or
    /// `<item>:<step>`, without timings.
    pub fn status_map(&self) -> BTreeMap<String, String> {
        let mut out = BTreeMap::new();
        for o in &self.obligations {
            out.insert(o.id.clone(), o.status.name().to_string());
        }
        for i in &self.items {
            out.insert(i.label.clone(), format!("{:?}", i.status));
            for s in &i.steps {
                if let Some(st) = &s.status {
                    out.insert(format!("{}:{}", i.label, s.index), st.name().to_string());
                }
            }
        }
        out
    }

    /// `<obligation-id> <status> <millis>` per obligation.
    pub fn text_log(&self) -> String {
        self.obligations
            .iter()
            .map(|o| format!("{} {} {}\n", o.id, o.status.name(), o.millis))
            .collect()
    }

    pub fn item(&self, label: &str) -> Option<&ItemReport> {
        self.items.iter().find(|i| i.label == label)
    }

    pub fn obligation(&self, id: &str) -> Option<&ObligationReport> {
        self.obligations.iter().find(|o| o.id == id)
    }

    pub fn failed_steps(&self) -> usize {
        self.items
            .iter()
            .flat_map(|i| &i.steps)
            .filter(|s| matches!(&s.status, Some(st) if !st.is_verified()))
            .count()
    }

    pub fn is_clean(&self) -> bool {
        self.errors.is_empty() && self.items.iter().all(|i| i.status != ItemStatus::Failed)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("{item}: reference `{name}` is not in the library")]
    UnresolvedReference { item: String, name: String },
}

/// Result of walking one item's proof skeleton.
#[derive(Clone, Debug)]
struct ItemWalk {
    obligations: Vec<Obligation>,
    steps: Vec<StepReport>,
    errors: Vec<String>,
    unresolved: Vec<VerifyError>,
    skeleton_failed: bool,
}

struct Walker<'a> {
    article: &'a Article,
    lib: &'a LibraryStore,
    item: &'a Item,
    exported: &'a BTreeMap<String, ExportedItem>,
    labels: BTreeMap<String, ExportedItem>,
    supply: ConstantSupply,
    flat: usize,
    e_ordinal: usize,
    out: ItemWalk,
}

impl Walker<'_> {
    fn resolve(&mut self, name: &str, kind: RefKind) -> Option<ExportedItem> {
        let found = match kind {
            RefKind::Local => self
                .labels
                .get(name)
                .or_else(|| self.exported.get(name))
                .cloned(),
            RefKind::Library => self.lib.get(name).cloned(),
        };
        if found.is_none() {
            self.out.unresolved.push(VerifyError::UnresolvedReference {
                item: self.item.label.clone(),
                name: name.to_string(),
            });
            self.out
                .errors
                .push(format!("unresolved reference `{name}`"));
        }
        found
    }

    fn walk(&mut self, proof: &Proof, mut thesis: Thesis, depth: usize) -> Thesis {
        for step in &proof.steps {
            self.flat += 1;
            let index = self.flat;
            let stated = step.formula().map(|f| thesis.instantiate(self.article, f));
            let mut id = None;
            if stated.is_some() {
                self.e_ordinal += 1;
                id = Some(
                    MptpName::Step {
                        ordinal: self.e_ordinal,
                        item: self.item.ordinal,
                        article: self.article.name.clone(),
                    }
                    .to_string(),
                );
            }
            let mut status = None;
            let next = match step_thesis(&thesis, step, self.article, &mut self.supply) {
                Ok(t) => t,
                Err(e) => {
                    self.out.skeleton_failed = true;
                    status = Some(StepStatus::SkeletonError(e.to_string()));
                    let mut t = thesis.clone();
                    if let ProofStep::Let { vars } = step {
                        t.bind(self.article, vars, &mut self.supply);
                    }
                    t
                }
            };
            let mut obligation = None;
            match step.justification() {
                Some(Justification::By(refs)) => {
                    let resolved: Vec<Option<ExportedItem>> =
                        refs.iter().map(|r| self.resolve(&r.name, r.kind)).collect();
                    if resolved.iter().all(Option::is_some) {
                        let oid = id.clone().expect("justified steps state a formula");
                        self.out.obligations.push(Obligation {
                            id: oid.clone(),
                            article: self.article.name.clone(),
                            item: self.item.label.clone(),
                            item_ordinal: self.item.ordinal,
                            step: index,
                            ordinal: self.e_ordinal,
                            conjecture: stated.clone().unwrap(),
                            explicit_refs: resolved.into_iter().flatten().collect(),
                            scope: thesis.scope.clone(),
                        });
                        obligation = Some(oid);
                    }
                }
                Some(Justification::Proof(sub)) => {
                    let goal = stated.clone().unwrap();
                    let inner = thesis.nested(goal);
                    let report_at = self.out.steps.len();
                    self.out.steps.push(StepReport {
                        index,
                        depth,
                        kind: step.keyword().to_string(),
                        label: step.label().map(str::to_string),
                        obligation: None,
                        status: status.clone(),
                        thesis_after: next.current.clone(),
                        millis: None,
                    });
                    let done = self.walk(sub, inner, depth + 1);
                    if !done.is_discharged() {
                        self.out.skeleton_failed = true;
                        let msg = format!(
                            "{}: subproof ends with unproved thesis `{}`",
                            step.keyword(),
                            formula_to_mfl(&done.current)
                        );
                        self.out.steps[report_at].status.get_or_insert(StepStatus::SkeletonError(msg));
                    }
                    self.register(step, &id, &stated);
                    thesis = next;
                    continue;
                }
                None => {}
            }
            self.register(step, &id, &stated);
            self.out.steps.push(StepReport {
                index,
                depth,
                kind: step.keyword().to_string(),
                label: step.label().map(str::to_string),
                obligation,
                status,
                thesis_after: next.current.clone(),
                millis: None,
            });
            thesis = next;
        }
        thesis
    }

    fn register(&mut self, step: &ProofStep, id: &Option<String>, stated: &Option<Formula>) {
        if let (Some(label), Some(id), Some(f)) = (step.label(), id, stated) {
            let it = ExportedItem::new(id.clone(), ExportKind::Step, &self.article.name, label, f.clone());
            self.labels.insert(label.to_string(), it);
        }
    }
}

fn walk_item(
    article: &Article,
    lib: &LibraryStore,
    exported: &BTreeMap<String, ExportedItem>,
    taken: &BTreeSet<String>,
    item: &Item,
) -> ItemWalk {
    let mut w = Walker {
        article,
        lib,
        item,
        exported,
        labels: BTreeMap::new(),
        supply: ConstantSupply::new(taken.clone()),
        flat: 0,
        e_ordinal: 0,
        out: ItemWalk {
            obligations: Vec::new(),
            steps: Vec::new(),
            errors: Vec::new(),
            unresolved: Vec::new(),
            skeleton_failed: false,
        },
    };
    if let Some(proof) = &item.proof {
        let done = w.walk(proof, Thesis::new(article.elaborate(&item.formula)), 0);
        if !done.is_discharged() {
            w.out.skeleton_failed = true;
            w.out.errors.push(format!(
                "proof ends with unproved thesis `{}`",
                formula_to_mfl(&done.current)
            ));
        }
    }
    w.out
}

fn walk_article(article: &Article, lib: &LibraryStore) -> Vec<ItemWalk> {
    let exported: BTreeMap<String, ExportedItem> = export_items(article)
        .into_iter()
        .filter(|i| matches!(i.kind, ExportKind::Theorem | ExportKind::Definition))
        .map(|i| (i.source.clone(), i))
        .collect();
    let mut taken = article.symbols();
    taken.extend(lib.symbols());
    article
        .items
        .iter()
        .map(|item| walk_item(article, lib, &exported, &taken, item))
        .collect()
}

/// One obligation per `by` justification, in textual order.
pub fn extract_obligations(a: &Article, lib: &LibraryStore) -> Result<Vec<Obligation>, VerifyError> {
    let mut out = Vec::new();
    for w in walk_article(a, lib) {
        if let Some(e) = w.unresolved.into_iter().next() {
            return Err(e);
        }
        out.extend(w.obligations);
    }
    Ok(out)
}

/// Obligations whose references all resolve, with a message per
/// unresolved reference.
pub fn collect_obligations(a: &Article, lib: &LibraryStore) -> (Vec<Obligation>, Vec<VerifyError>) {
    let mut obligations = Vec::new();
    let mut errors = Vec::new();
    for w in walk_article(a, lib) {
        obligations.extend(w.obligations);
        errors.extend(w.unresolved);
    }
    (obligations, errors)
}

/// Outcome of checking one obligation.
#[derive(Clone, Debug)]
pub struct CheckOutcome {
    pub status: StepStatus,
    pub run: Option<RunResult>,
    pub error: Option<GenerationError>,
}

/// Checks `o` with the internal prover on the premises its generated
/// problem would carry.
pub fn check_obligation(o: &Obligation, lib: &LibraryStore, local: &[ExportedItem], limits: &CheckLimits) -> CheckOutcome {
    match generate_problem(o, lib, local) {
        Ok(p) => {
            let run = prove_formulas(&p.axioms, Some(&p.conjecture), limits);
            CheckOutcome {
                status: StepStatus::from_szs(&run.status),
                run: Some(run),
                error: None,
            }
        }
        Err(e) => CheckOutcome {
            status: StepStatus::GaveUp,
            run: None,
            error: Some(e),
        },
    }
}

/// Premises and conjecture `o` is checked against.
pub fn obligation_formulas(
    o: &Obligation,
    lib: &LibraryStore,
    local: &[ExportedItem],
) -> Result<(Vec<NamedFormula>, NamedFormula), GenerationError> {
    generate_problem(o, lib, local).map(|p| (p.axioms, p.conjecture))
}

/// Runs `f` over `jobs` on up to `workers` threads; results keep job order.
pub fn run_parallel<T: Sync, R: Send>(jobs: &[T], workers: usize, f: impl Fn(&T) -> R + Sync) -> Vec<R> {
    let workers = workers.max(1).min(jobs.len().max(1));
    let next = AtomicUsize::new(0);
    let results: Mutex<Vec<(usize, R)>> = Mutex::new(Vec::with_capacity(jobs.len()));
    thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let i = next.fetch_add(1, Ordering::SeqCst);
                if i >= jobs.len() {
                    break;
                }
                let r = f(&jobs[i]);
                results.lock().unwrap().push((i, r));
            });
        }
    });
    let mut results = results.into_inner().unwrap();
    results.sort_by_key(|(i, _)| *i);
    results.into_iter().map(|(_, r)| r).collect()
}

pub fn verify_article(a: &Article, lib: &LibraryStore, workers: usize) -> VerificationReport {
    verify_article_with(a, lib, workers, &Limits::checker())
}

/// Checks every obligation of `a` with at most `workers` in flight.
pub fn verify_article_with(a: &Article, lib: &LibraryStore, workers: usize, limits: &CheckLimits) -> VerificationReport {
    let walks = walk_article(a, lib);
    let local = functor_type_axioms(a);
    let obligations: Vec<Obligation> = walks.iter().flat_map(|w| w.obligations.iter().cloned()).collect();
    let checked = run_parallel(&obligations, workers, |o| {
        let start = Instant::now();
        let out = check_obligation(o, lib, &local, limits);
        (out, start.elapsed().as_millis() as u64)
    });
    let mut by_id: BTreeMap<&str, (&CheckOutcome, u64)> = BTreeMap::new();
    let mut reports = Vec::new();
    for (o, (out, ms)) in obligations.iter().zip(&checked) {
        by_id.insert(&o.id, (out, *ms));
        reports.push(ObligationReport {
            id: o.id.clone(),
            item: o.item.clone(),
            step: o.step,
            status: out.status.clone(),
            millis: *ms,
            conjecture: o.conjecture.clone(),
            refs: o.ref_names(),
        });
    }
    let mut items = Vec::new();
    for (item, walk) in a.items.iter().zip(walks) {
        let mut errors = walk.errors;
        let mut steps = walk.steps;
        for s in &mut steps {
            let Some(oid) = &s.obligation else { continue };
            let (out, ms) = by_id[oid.as_str()];
            s.millis = Some(ms);
            if let Some(e) = &out.error {
                errors.push(e.to_string());
            }
            if s.status.is_none() {
                s.status = Some(out.status.clone());
            }
        }
        let any_failed = walk.skeleton_failed
            || !errors.is_empty()
            || steps.iter().any(|s| matches!(&s.status, Some(st) if !st.is_verified()));
        let status = if any_failed {
            ItemStatus::Failed
        } else if item.kind == ItemKind::Theorem && item.proof.is_none() {
            ItemStatus::Unproved
        } else {
            ItemStatus::Verified
        };
        items.push(ItemReport {
            label: item.label.clone(),
            kind: item.kind,
            ordinal: item.ordinal,
            mptp_name: crate::problem::item_name(a, item.kind, item.ordinal),
            status,
            errors,
            steps,
        });
    }
    let mut errors = Vec::new();
    for f in &a.functors {
        if let Some(dt) = lib.functor_type(&f.name) {
            errors.push(format!("functor `{}` is already declared by {}", f.name, dt.article));
        }
    }
    VerificationReport {
        article: a.name.clone(),
        errors,
        items,
        obligations: reports,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::article::parse_article;

    const MTEST1: &str = "article mtest1; reserve R for relation; reserve X for set;
func relincl(X) -> relation;
definition d1: for X holds wellorder(relincl(X));
theorem t1: for R holds R = R;
theorem t2: for X holds wellorder(relincl(X))
proof let X; assume a1: set(X); thus wellorder(relincl(X)) by d1; end;";

    #[test]
    fn golden_single_obligation() {
        let a = parse_article(MTEST1).unwrap();
        let obs = extract_obligations(&a, &LibraryStore::new()).unwrap();
        assert_eq!(obs.len(), 1);
        assert_eq!(obs[0].id, "e2_2__mtest1");
        assert_eq!(obs[0].origin(), "t2:3");
        assert_eq!(formula_to_mfl(&obs[0].conjecture), "wellorder(relincl(c1))");
        assert_eq!(obs[0].ref_names(), vec!["d1_mtest1"]);
    }

    #[test]
    fn golden_verifies() {
        let a = parse_article(MTEST1).unwrap();
        let r = verify_article(&a, &LibraryStore::new(), 2);
        assert!(r.is_clean(), "{r:#?}");
        assert_eq!(r.obligations[0].status, StepStatus::Verified);
        assert_eq!(r.item("t1").unwrap().status, ItemStatus::Unproved);
        assert_eq!(r.item("t2").unwrap().status, ItemStatus::Verified);
        assert!(r.text_log().starts_with("e2_2__mtest1 verified "));
    }

    #[test]
    fn no_proofs_no_obligations() {
        let a = parse_article("article a; theorem t1: p;").unwrap();
        assert!(extract_obligations(&a, &LibraryStore::new()).unwrap().is_empty());
    }

    #[test]
    fn one_obligation_per_by() {
        let a = parse_article(
            "article a; definition d1: p & q & r & s;
             theorem t1: p & q & r & s proof
               a1: p by d1; a2: q by d1; a3: r by d1; thus p & q & r & s by a1, a2, a3, d1; end;",
        )
        .unwrap();
        let obs = extract_obligations(&a, &LibraryStore::new()).unwrap();
        assert_eq!(obs.len(), 4);
        assert_eq!(obs[3].ref_names(), vec!["e1_1__a", "e2_1__a", "e3_1__a", "d1_a"]);
    }

    #[test]
    fn unresolved_library_reference() {
        let a = parse_article("article a; theorem t1: p proof thus p by t3_zzz; end;").unwrap();
        let err = extract_obligations(&a, &LibraryStore::new()).unwrap_err();
        assert!(err.to_string().contains("t3_zzz"));
    }

    #[test]
    fn checker_basics() {
        let a = parse_article(
            "article a; definition d1: p; theorem t1: p proof thus p by d1; end; theorem t2: q proof thus q by d1; end;",
        )
        .unwrap();
        let r = verify_article(&a, &LibraryStore::new(), 1);
        assert_eq!(r.obligations[0].status, StepStatus::Verified);
        assert_eq!(r.obligations[1].status, StepStatus::Countersatisfiable);
        assert_eq!(r.item("t2").unwrap().status, ItemStatus::Failed);
    }

    #[test]
    fn skeleton_error_does_not_block_other_items() {
        let a = parse_article(
            "article a; definition d1: p & q;
             theorem t1: p & q proof thus q by d1; thus p by d1; end;
             theorem t2: p proof thus p by d1; end;",
        )
        .unwrap();
        let r = verify_article(&a, &LibraryStore::new(), 2);
        let t1 = r.item("t1").unwrap();
        assert_eq!(t1.status, ItemStatus::Failed);
        assert!(matches!(t1.steps[0].status, Some(StepStatus::SkeletonError(_))));
        assert_eq!(r.item("t2").unwrap().status, ItemStatus::Verified);
    }

    #[test]
    fn subproof_scopes() {
        let a = parse_article(
            "article a; reserve X for set; definition d1: for X holds r(X);
             theorem t1: for X holds (r(X) or q)
             proof let X; assume set(X); thus r(X) or q proof thus r(X) or q by d1; end; end;",
        )
        .unwrap();
        let r = verify_article(&a, &LibraryStore::new(), 1);
        assert!(r.is_clean(), "{r:#?}");
        assert_eq!(r.obligations.len(), 1);
        assert_eq!(r.obligations[0].id, "e3_1__a");
    }

    #[test]
    fn unfinished_proof_fails() {
        let a = parse_article("article a; definition d1: p; theorem t1: p & q proof thus p by d1; end;").unwrap();
        let r = verify_article(&a, &LibraryStore::new(), 1);
        assert_eq!(r.item("t1").unwrap().status, ItemStatus::Failed);
    }

    #[test]
    fn parallel_order_is_stable() {
        let v: Vec<usize> = (0..50).collect();
        assert_eq!(run_parallel(&v, 4, |x| x * 2), v.iter().map(|x| x * 2).collect::<Vec<_>>());
    }

    #[test]
    fn status_serialization() {
        assert_eq!(serde_json::to_string(&StepStatus::GaveUp).unwrap(), r#"{"status":"gaveup"}"#);
        let s = StepStatus::SkeletonError("x".into());
        assert_eq!(serde_json::to_string(&s).unwrap(), r#"{"status":"skeleton_error","reason":"x"}"#);
    }
}
