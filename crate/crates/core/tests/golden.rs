use std::collections::BTreeSet;
use std::fs;

use proofdesk_core::advisor::harvest;
use proofdesk_core::article::{parse_article, pretty_print, ProofStep};
use proofdesk_core::formula::tptp::parse_tptp;
use proofdesk_core::problem::{
    export_article, functor_type_axioms, generate_all, generate_problem, DirSink, LibraryStore,
};
use proofdesk_core::prover::{prove_formulas, Limits, SzsStatus};
use proofdesk_core::verifier::{extract_obligations, verify_article, ItemStatus, StepStatus};
use proofdesk_testkit::fixtures::{MTEST1, MTEST1_OBLIGATION, MTEST1_PROBLEM, MTEST1_STRIPPED, SEVEN_NAMES};
use proofdesk_testkit::scanner;

#[test]
fn sample_article_structure() {
    let a = parse_article(MTEST1).unwrap();
    assert_eq!(a.name, "mtest1");
    assert_eq!(a.reservations.len(), 2);
    assert_eq!(a.functors.len(), 1);
    assert_eq!(a.functors[0].name, "relincl");
    assert_eq!(a.items.len(), 3);
    let proof = a.item("t2").unwrap().proof.as_ref().unwrap();
    assert_eq!(proof.steps.len(), 3);
    assert!(matches!(proof.steps[0], ProofStep::Let { .. }));
    assert!(a.item("t1").unwrap().proof.is_none());
}

#[test]
fn sample_round_trips() {
    let a = parse_article(MTEST1).unwrap();
    let printed = pretty_print(&a);
    assert_eq!(parse_article(&printed).unwrap(), a);
    assert_eq!(pretty_print(&parse_article(&printed).unwrap()), printed);
}

#[test]
fn sample_problem_matches_golden_file() {
    let a = parse_article(MTEST1).unwrap();
    let lib = LibraryStore::new();
    let obs = extract_obligations(&a, &lib).unwrap();
    assert_eq!(obs.len(), 1);
    let p = generate_problem(&obs[0], &lib, &functor_type_axioms(&a)).unwrap();
    assert_eq!(p.to_tptp().unwrap(), MTEST1_PROBLEM);
    assert!(scanner::violations(MTEST1_PROBLEM, &obs[0].ref_names()).is_empty());
}

#[test]
fn sample_generation_writes_files_and_log() {
    let dir = tempfile::tempdir().unwrap();
    let a = parse_article(MTEST1).unwrap();
    let lib = LibraryStore::new();
    let obs = extract_obligations(&a, &lib).unwrap();
    let mut sink = DirSink::new(dir.path(), &a.name).unwrap();
    let log = generate_all(&obs, &lib, &functor_type_axioms(&a), &mut sink);
    assert_eq!(log.generated, vec![MTEST1_OBLIGATION]);
    let text = fs::read_to_string(dir.path().join("mtest1/problems/e2_2__mtest1.p")).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "% origin: t2:3");
    assert!(lines[1].starts_with("% generated: "));
    let without_stamp: String = text.lines().filter(|l| !l.starts_with("% generated")).map(|l| format!("{l}\n")).collect();
    assert_eq!(without_stamp, MTEST1_PROBLEM);
    let gen_log = fs::read_to_string(dir.path().join("mtest1/generation.log")).unwrap();
    assert_eq!(gen_log.lines().count(), 1);
    assert!(gen_log.trim_end().ends_with("generated e2_2__mtest1"));
}

#[test]
fn sample_proves_with_mini_e() {
    let a = parse_article(MTEST1).unwrap();
    let lib = LibraryStore::new();
    let o = &extract_obligations(&a, &lib).unwrap()[0];
    let p = generate_problem(o, &lib, &functor_type_axioms(&a)).unwrap();
    let r = prove_formulas(&p.axioms, Some(&p.conjecture), &Limits::default());
    assert_eq!(r.status, SzsStatus::Theorem);
    let used: BTreeSet<String> = r.used_axioms.unwrap().into_iter().collect();
    assert!(used.contains("d1_mtest1"));
    assert!(used.contains("dt_c1_2__mtest1"));
    assert!(used.iter().all(|n| p.names().contains(n)));
}

#[test]
fn sample_verification_and_export() {
    let a = parse_article(MTEST1).unwrap();
    let lib = LibraryStore::new();
    let r1 = verify_article(&a, &lib, 1);
    let r8 = verify_article(&a, &lib, 8);
    assert_eq!(r1.status_map(), r8.status_map());
    assert!(r1.is_clean());
    assert_eq!(r1.obligations[0].status, StepStatus::Verified);
    let items = export_article(&a, &r1, false).unwrap();
    let names: Vec<&str> = items.iter().map(|i| i.name.as_str()).collect();
    assert_eq!(names, vec!["d1_mtest1", "t1_mtest1", "t2_mtest1", "dt_k1_mtest1"]);
    let mut store = LibraryStore::new();
    store.add_article("mtest1", items).unwrap();
    assert!(store.get("t2_mtest1").is_some());
}

#[test]
fn stripped_sample_is_countersatisfiable_and_blocks_export() {
    let a = parse_article(MTEST1_STRIPPED).unwrap();
    let r = verify_article(&a, &LibraryStore::new(), 1);
    assert_eq!(r.obligations[0].status, StepStatus::Countersatisfiable);
    assert_eq!(r.item("t2").unwrap().status, ItemStatus::Failed);
    assert!(export_article(&a, &r, false).is_err());
    assert!(export_article(&a, &r, true).is_ok());
}

#[test]
fn sample_harvest() {
    let a = parse_article(MTEST1).unwrap();
    let lib = LibraryStore::new();
    let r = verify_article(&a, &lib, 1);
    let obs = extract_obligations(&a, &lib).unwrap();
    let problems = vec![generate_problem(&obs[0], &lib, &functor_type_axioms(&a)).unwrap()];
    let ex = harvest(&r, &obs, &problems, &[]);
    assert_eq!(ex.len(), 1);
    let goal: Vec<&str> = ex[0].goal_symbols.iter().map(String::as_str).collect();
    assert_eq!(goal, vec!["relincl", "set", "wellorder"]);
    let prem: Vec<&str> = ex[0].used_premises.iter().map(String::as_str).collect();
    assert_eq!(prem, vec!["d1_mtest1", "dt_c1_2__mtest1", "dt_k1_mtest1"]);
}

#[test]
fn harvest_prefers_reported_used_axioms() {
    let a = parse_article(MTEST1).unwrap();
    let lib = LibraryStore::new();
    let r = verify_article(&a, &lib, 1);
    let obs = extract_obligations(&a, &lib).unwrap();
    let p = generate_problem(&obs[0], &lib, &functor_type_axioms(&a)).unwrap();
    let run = prove_formulas(&p.axioms, Some(&p.conjecture), &Limits::default());
    let ex = harvest(&r, &obs, &[p], &[(obs[0].id.clone(), run)]);
    let prem: Vec<&str> = ex[0].used_premises.iter().map(String::as_str).collect();
    assert_eq!(prem, vec!["d1_mtest1", "dt_c1_2__mtest1"]);
}

#[test]
fn all_gave_up_harvests_nothing() {
    let a = parse_article(MTEST1_STRIPPED).unwrap();
    let lib = LibraryStore::new();
    let r = verify_article(&a, &lib, 1);
    let obs = extract_obligations(&a, &lib).unwrap();
    assert!(harvest(&r, &obs, &[], &[]).is_empty());
}

#[test]
fn seven_names() {
    let a = parse_article(SEVEN_NAMES).unwrap();
    let lib = LibraryStore::new();
    let obs = extract_obligations(&a, &lib).unwrap();
    assert_eq!(obs.len(), 1);
    assert_eq!(obs[0].explicit_refs.len(), 4);
    let p = generate_problem(&obs[0], &lib, &functor_type_axioms(&a)).unwrap();
    assert_eq!(p.formula_count(), 7);
    let text = p.to_tptp().unwrap();
    assert_eq!(parse_tptp(&text).unwrap().len(), 7);
    let r = prove_formulas(&p.axioms, Some(&p.conjecture), &Limits::default());
    assert_eq!(r.status, SzsStatus::Theorem);
    let names = p.names();
    assert!(r.used_axioms.unwrap().iter().all(|n| names.contains(n)));
}

#[test]
fn generation_without_refs_is_countersatisfiable() {
    let a = parse_article("article a; definition d1: q; theorem t1: p proof thus p by d1; end;").unwrap();
    let lib = LibraryStore::new();
    let mut o = extract_obligations(&a, &lib).unwrap().remove(0);
    o.explicit_refs.clear();
    let p = generate_problem(&o, &lib, &[]).unwrap();
    assert!(p.axioms.is_empty());
    let r = prove_formulas(&p.axioms, Some(&p.conjecture), &Limits::default());
    assert_eq!(r.status, SzsStatus::CounterSatisfiable);
}

#[test]
fn undeclared_functor_is_a_generation_error() {
    let a = parse_article("article a; definition d1: p(k); theorem t1: p(k) proof thus p(k) by d1; end;").unwrap();
    let lib = LibraryStore::new();
    let o = &extract_obligations(&a, &lib).unwrap()[0];
    let err = generate_problem(o, &lib, &functor_type_axioms(&a)).unwrap_err();
    assert!(err.to_string().contains("`k`"));
    let r = verify_article(&a, &lib, 1);
    assert_eq!(r.item("t1").unwrap().status, ItemStatus::Failed);
}
