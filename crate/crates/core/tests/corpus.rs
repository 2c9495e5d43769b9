use std::collections::BTreeMap;

use proofdesk_core::article::parse_article;
use proofdesk_core::problem::{functor_type_axioms, generate_all, DirSink, LibraryStore, ProblemSink, TptpProblem};
use proofdesk_core::verifier::{extract_obligations, verify_article, StepStatus};
use proofdesk_testkit::corpus::{golden_corpus, parallel_corpus, process_corpus, GOLDEN_OBLIGATIONS_PER_ARTICLE};
use proofdesk_testkit::scanner;

#[test]
fn golden_corpus_verifies_and_is_self_contained() {
    let (lib, processed) = process_corpus(&golden_corpus(), 2);
    assert_eq!(processed.len(), 20);
    let mut total = 0;
    for p in &processed {
        assert!(p.report.is_clean(), "{}: {:#?}", p.article.name, p.report);
        assert_eq!(p.obligations.len(), GOLDEN_OBLIGATIONS_PER_ARTICLE);
        assert_eq!(p.obligations.len(), p.article.by_count());
        for (o, prob) in p.obligations.iter().zip(&p.problems) {
            let text = prob.to_tptp().unwrap();
            let v = scanner::violations(&text, &o.ref_names());
            assert!(v.is_empty(), "{}: {v:?}\n{text}", o.id);
        }
        total += p.obligations.len();
    }
    assert!(total >= 200);
    assert_eq!(lib.article_names().count(), 20);
}

#[test]
fn library_functors_pull_in_library_type_axioms() {
    let (_, processed) = process_corpus(&golden_corpus()[..2], 1);
    let t4 = processed[1].problems.iter().find(|p| p.header[0] == "origin: t4:3").unwrap();
    let names = t4.names();
    assert!(names.contains(&"d1_g01".to_string()), "{names:?}");
    assert!(names.contains(&"dt_k1_g01".to_string()), "{names:?}");
}

#[test]
fn parallel_corpus_statuses_independent_of_workers() {
    let a = parse_article(&parallel_corpus()).unwrap();
    let lib = LibraryStore::new();
    let base = verify_article(&a, &lib, 1);
    assert_eq!(base.obligations.len(), 200);
    let counter = base
        .obligations
        .iter()
        .filter(|o| o.status == StepStatus::Countersatisfiable)
        .count();
    assert_eq!(counter, 10);
    for w in [2, 4, 8] {
        assert_eq!(verify_article(&a, &lib, w).status_map(), base.status_map(), "workers={w}");
    }
}

#[test]
fn parallel_corpus_generates_two_hundred_problems() {
    let dir = tempfile::tempdir().unwrap();
    let a = parse_article(&parallel_corpus()).unwrap();
    let lib = LibraryStore::new();
    let obs = extract_obligations(&a, &lib).unwrap();
    let mut sink = DirSink::new(dir.path(), &a.name).unwrap();
    let log = generate_all(&obs, &lib, &functor_type_axioms(&a), &mut sink);
    assert_eq!(log.generated_count(), 200);
    let text = std::fs::read_to_string(dir.path().join("par200/generation.log")).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains(" generated ")).count(), 200);
    assert_eq!(std::fs::read_dir(dir.path().join("par200/problems")).unwrap().count(), 200);
}

/// Fails after accepting `limit` problems.
struct FlakySink {
    limit: usize,
    accepted: Vec<String>,
    log: Vec<String>,
}

impl ProblemSink for FlakySink {
    fn accept(&mut self, p: &TptpProblem, _: &str) -> std::io::Result<()> {
        if self.accepted.len() == self.limit {
            return Err(std::io::Error::other("disk full"));
        }
        self.accepted.push(p.name.clone());
        Ok(())
    }

    fn log(&mut self, line: &str) -> std::io::Result<()> {
        self.log.push(line.to_string());
        Ok(())
    }
}

#[test]
fn sink_failure_leaves_a_prefix() {
    let a = parse_article(&parallel_corpus()).unwrap();
    let lib = LibraryStore::new();
    let obs = extract_obligations(&a, &lib).unwrap();
    let mut sink = FlakySink {
        limit: 17,
        accepted: Vec::new(),
        log: Vec::new(),
    };
    let log = generate_all(&obs, &lib, &functor_type_axioms(&a), &mut sink);
    assert!(log.aborted.is_some());
    let expected: Vec<String> = obs.iter().take(17).map(|o| o.id.clone()).collect();
    assert_eq!(log.generated, expected);
    assert_eq!(sink.accepted, expected);
    assert_eq!(sink.log.len(), 17);
}

#[test]
fn generation_is_deterministic() {
    let (_, a) = process_corpus(&golden_corpus()[..3], 1);
    let (_, b) = process_corpus(&golden_corpus()[..3], 4);
    let texts = |ps: &[proofdesk_testkit::corpus::Processed]| -> BTreeMap<String, String> {
        ps.iter()
            .flat_map(|p| p.problems.iter().map(|q| (q.name.clone(), q.to_tptp().unwrap())))
            .collect()
    };
    assert_eq!(texts(&a), texts(&b));
}
