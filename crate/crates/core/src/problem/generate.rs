use std::collections::{BTreeMap, BTreeSet};
use std::fs::{self, OpenOptions};
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ExportKind, ExportedItem, LibraryStore, MptpName};
use crate::formula::tptp::{serialize_tptp, Role, TptpError};
use crate::formula::{Formula, NamedFormula};
use crate::verifier::Obligation;

/// A self-contained first-order problem for one obligation.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TptpProblem {
    pub name: String,
    /// Comment lines, without the leading `% `.
    pub header: Vec<String>,
    pub axioms: Vec<NamedFormula>,
    pub conjecture: NamedFormula,
}

impl TptpProblem {
    /// Deterministic TPTP text.
    pub fn to_tptp(&self) -> Result<String, TptpError> {
        let mut out = String::new();
        for h in &self.header {
            out.push_str("% ");
            out.push_str(h);
            out.push('\n');
        }
        for a in &self.axioms {
            out.push_str(&serialize_tptp(&a.name, Role::Axiom, &a.formula)?);
            out.push('\n');
        }
        out.push_str(&serialize_tptp(&self.conjecture.name, Role::Conjecture, &self.conjecture.formula)?);
        out.push('\n');
        Ok(out)
    }

    /// TPTP text with a `% generated:` timestamp line after the header.
    pub fn to_tptp_stamped(&self, timestamp: &str) -> Result<String, TptpError> {
        let mut stamped = self.clone();
        stamped.header.push(format!("generated: {timestamp}"));
        stamped.to_tptp()
    }

    /// Names of all formulas, conjecture last.
    pub fn names(&self) -> Vec<String> {
        let mut out: Vec<String> = self.axioms.iter().map(|a| a.name.clone()).collect();
        out.push(self.conjecture.name.clone());
        out
    }

    pub fn formula_count(&self) -> usize {
        self.axioms.len() + 1
    }

    /// The same problem restricted to the named axioms.
    pub fn restricted_to(&self, keep: &BTreeSet<String>) -> TptpProblem {
        let mut p = self.clone();
        p.axioms.retain(|a| keep.contains(&a.name));
        p
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerationError {
    #[error("{obligation}: unresolved reference `{name}`")]
    UnresolvedReference { obligation: String, name: String },
    #[error("{obligation}: symbol `{symbol}` has no declaration")]
    UndeclaredSymbol { obligation: String, symbol: String },
}

/// Type axiom for a functor or constant symbol: a scope constant, a functor
/// of the current article, or a library functor, in that order.
fn type_axiom(
    symbol: &str,
    scope: &BTreeMap<String, ExportedItem>,
    local: &[ExportedItem],
    lib: &LibraryStore,
) -> Option<ExportedItem> {
    if let Some(c) = scope.get(symbol) {
        return Some(c.clone());
    }
    if let Some(it) = local
        .iter()
        .find(|i| i.kind == ExportKind::FunctorType && i.typed_symbol.as_deref() == Some(symbol))
    {
        return Some(it.clone());
    }
    lib.functor_type(symbol).cloned()
}

/// Type axioms of scope constants of `o`.
pub fn scope_type_axioms(o: &Obligation) -> Vec<ExportedItem> {
    o.scope
        .iter()
        .map(|c| {
            let name = MptpName::ConstantType {
                ordinal: c.number,
                item: o.item_ordinal,
                article: o.article.clone(),
            };
            let f = Formula::atom(c.type_pred.clone(), vec![crate::formula::Term::Const(c.name.clone())]);
            ExportedItem::new(name.to_string(), ExportKind::ConstantType, &o.article, &c.name, f).typing(&c.name)
        })
        .collect()
}

/// Explicit references in citation order, then the `dt_*` closure over all
/// functor and constant symbols sorted by name, then the conjecture.
pub fn generate_problem(
    o: &Obligation,
    lib: &LibraryStore,
    local: &[ExportedItem],
) -> Result<TptpProblem, GenerationError> {
    let scope: BTreeMap<String, ExportedItem> = scope_type_axioms(o)
        .into_iter()
        .map(|it| (it.typed_symbol.clone().unwrap(), it))
        .collect();
    let mut axioms: Vec<NamedFormula> = Vec::new();
    let mut names: BTreeSet<String> = BTreeSet::new();
    for r in &o.explicit_refs {
        if names.insert(r.name.clone()) {
            axioms.push(NamedFormula::new(r.name.clone(), r.formula.clone()));
        }
    }
    let mut pending: Vec<String> = o.conjecture.functors().into_keys().collect();
    for a in &axioms {
        pending.extend(a.formula.functors().into_keys());
    }
    let mut covered: BTreeSet<String> = BTreeSet::new();
    let mut closure: BTreeMap<String, Formula> = BTreeMap::new();
    while let Some(sym) = pending.pop() {
        if !covered.insert(sym.clone()) {
            continue;
        }
        let Some(dt) = type_axiom(&sym, &scope, local, lib) else {
            return Err(GenerationError::UndeclaredSymbol {
                obligation: o.id.clone(),
                symbol: sym,
            });
        };
        if names.contains(&dt.name) || closure.contains_key(&dt.name) {
            continue;
        }
        pending.extend(dt.formula.functors().into_keys());
        closure.insert(dt.name.clone(), dt.formula.clone());
    }
    axioms.extend(closure.into_iter().map(|(n, f)| NamedFormula::new(n, f)));
    Ok(TptpProblem {
        name: o.id.clone(),
        header: vec![format!("origin: {}:{}", o.item, o.step)],
        axioms,
        conjecture: NamedFormula::new(o.id.clone(), o.conjecture.clone()),
    })
}

/// Consumer of generated problems.
pub trait ProblemSink {
    fn accept(&mut self, problem: &TptpProblem, timestamp: &str) -> io::Result<()>;
    /// Records one generation-log line.
    fn log(&mut self, line: &str) -> io::Result<()>;
}

/// Writes `<root>/<article>/problems/<id>.p` atomically and appends to
/// `<root>/<article>/generation.log`.
pub struct DirSink {
    pub problems: PathBuf,
    pub log_path: PathBuf,
}

impl DirSink {
    pub fn new(root: &Path, article: &str) -> io::Result<Self> {
        let base = root.join(article);
        let problems = base.join("problems");
        fs::create_dir_all(&problems)?;
        Ok(DirSink {
            problems,
            log_path: base.join("generation.log"),
        })
    }

    pub fn problem_path(&self, id: &str) -> PathBuf {
        self.problems.join(format!("{id}.p"))
    }
}

impl ProblemSink for DirSink {
    fn accept(&mut self, problem: &TptpProblem, timestamp: &str) -> io::Result<()> {
        let text = problem
            .to_tptp_stamped(timestamp)
            .map_err(|e| io::Error::new(io::ErrorKind::InvalidData, e))?;
        crate::write_atomic(&self.problem_path(&problem.name), text.as_bytes())
    }

    fn log(&mut self, line: &str) -> io::Result<()> {
        let mut f = OpenOptions::new().create(true).append(true).open(&self.log_path)?;
        writeln!(f, "{line}")
    }
}

/// Outcome of a generation run.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenerationLog {
    pub lines: Vec<String>,
    pub generated: Vec<String>,
    pub failed: Vec<String>,
    /// Set when the sink failed and generation stopped.
    pub aborted: Option<String>,
}

impl GenerationLog {
    pub fn generated_count(&self) -> usize {
        self.generated.len()
    }
}

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Millis, true)
}

/// Generates the problem of every obligation in order and streams it to
/// `sink`. A problem that cannot be generated is logged and skipped; a sink
/// failure stops the run, so the log is always a prefix of the full one.
pub fn generate_all(
    obligations: &[Obligation],
    lib: &LibraryStore,
    local: &[ExportedItem],
    sink: &mut dyn ProblemSink,
) -> GenerationLog {
    let mut log = GenerationLog::default();
    for o in obligations {
        let ts = timestamp();
        match generate_problem(o, lib, local) {
            Ok(p) => {
                if let Err(e) = sink.accept(&p, &ts) {
                    log.aborted = Some(format!("{}: {e}", o.id));
                    return log;
                }
                let line = format!("{ts} generated {}", o.id);
                if let Err(e) = sink.log(&line) {
                    log.aborted = Some(format!("{}: {e}", o.id));
                    return log;
                }
                log.lines.push(line);
                log.generated.push(o.id.clone());
            }
            Err(e) => {
                let line = format!("{ts} error {}: {e}", o.id);
                let _ = sink.log(&line);
                log.lines.push(line);
                log.failed.push(o.id.clone());
            }
        }
    }
    log
}
