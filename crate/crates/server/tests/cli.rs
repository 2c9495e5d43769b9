use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use proofdesk_core::advisor::{harvest, train};
use proofdesk_core::article::parse_article;
use proofdesk_core::problem::{functor_type_axioms, generate_problem, LibraryStore};
use proofdesk_core::verifier::{collect_obligations, verify_article};
use proofdesk_testkit::fixtures::{MTEST1, MTEST1_OBLIGATION, MTEST1_STRIPPED};

fn proofdesk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_proofdesk")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn article(dir: &Path, text: &str) -> String {
    let p = dir.join("mtest1.mfl");
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn verify_prints_statuses_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let ok = proofdesk(&["verify", &article(dir.path(), MTEST1)]);
    assert_eq!(ok.status.code(), Some(0), "{}", String::from_utf8_lossy(&ok.stderr));
    assert!(stdout(&ok).contains("e2_2__mtest1 verified"), "{}", stdout(&ok));

    let bad = proofdesk(&["verify", &article(dir.path(), MTEST1_STRIPPED)]);
    assert_eq!(bad.status.code(), Some(1));

    let json = proofdesk(&["verify", "--json", &article(dir.path(), MTEST1)]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert!(v.is_object());
}

#[test]
fn parse_errors_and_missing_files_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let o = proofdesk(&["verify", &article(dir.path(), "article bad;\ntheorem t1: p(;\n")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains(":2:"));
    assert_eq!(proofdesk(&["verify", "/nonexistent/x.mfl"]).status.code(), Some(2));
}

#[test]
fn generate_then_prove() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let g = proofdesk(&["gen-problems", &article(dir.path(), MTEST1), "-o", out.to_str().unwrap()]);
    assert_eq!(g.status.code(), Some(0), "{}", String::from_utf8_lossy(&g.stderr));
    let problem = out.join("mtest1/problems").join(format!("{MTEST1_OBLIGATION}.p"));
    assert!(problem.exists());

    let p = proofdesk(&["prove", problem.to_str().unwrap()]);
    assert_eq!(p.status.code(), Some(0));
    let text = stdout(&p);
    assert!(text.contains(&format!("% SZS status Theorem for {MTEST1_OBLIGATION}")), "{text}");
    assert!(text.contains("d1_mtest1"));

    let unknown = proofdesk(&["prove", problem.to_str().unwrap(), "--system", "nosuch"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn advise_with_a_saved_model() {
    let dir = tempfile::tempdir().unwrap();
    let a = parse_article(MTEST1).unwrap();
    let lib = LibraryStore::new();
    let report = verify_article(&a, &lib, 1);
    let (obs, _) = collect_obligations(&a, &lib);
    let problems: Vec<_> = obs
        .iter()
        .filter_map(|o| generate_problem(o, &lib, &functor_type_axioms(&a)).ok())
        .collect();
    let model_path = dir.path().join("advisor.model");
    train(&harvest(&report, &obs, &problems, &[])).save(&model_path).unwrap();

    let file = article(dir.path(), MTEST1);
    let o = proofdesk(&["advise", &file, "--obligation", MTEST1_OBLIGATION, "-k", "5", "--model", model_path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.lines().count() <= 5);
    assert!(text.contains("d1_mtest1\t"), "{text}");
    let scores: Vec<f64> = text.lines().map(|l| l.split('\t').nth(1).unwrap().parse().unwrap()).collect();
    assert!(scores.windows(2).all(|w| w[0] >= w[1]), "{text}");

    let zero = proofdesk(&["advise", &file, "--obligation", MTEST1_OBLIGATION, "-k", "0"]);
    assert_eq!(zero.status.code(), Some(2));
}
