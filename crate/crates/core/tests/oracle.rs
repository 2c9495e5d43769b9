use std::time::Instant;

use proofdesk_core::formula::NamedFormula;
use proofdesk_core::prover::{prove_formulas, Limits, SzsStatus};
use proofdesk_testkit::prop::{entails, random_prop_obligation};
use proofdesk_testkit::rng;

fn formulas(ps: &[NamedFormula]) -> Vec<proofdesk_core::formula::Formula> {
    ps.iter().map(|p| p.formula.clone()).collect()
}

#[test]
fn mini_e_agrees_with_truth_tables() {
    let start = Instant::now();
    let mut r = rng(2024);
    let mut gave_up = 0;
    let mut theorems = 0;
    for i in 0..100 {
        let (premises, goal) = random_prop_obligation(&mut r);
        let expected = entails(&formulas(&premises), &goal.formula);
        let run = prove_formulas(&premises, Some(&goal), &Limits::checker());
        match run.status {
            SzsStatus::Theorem => {
                assert!(expected, "case {i}: Theorem for a non-entailed goal");
                theorems += 1;
            }
            SzsStatus::CounterSatisfiable => assert!(!expected, "case {i}: CounterSatisfiable for an entailed goal"),
            SzsStatus::GaveUp | SzsStatus::ResourceOut => gave_up += 1,
            SzsStatus::Error(e) => panic!("case {i}: {e}"),
        }
    }
    assert!(gave_up <= 5, "gave up on {gave_up} of 100");
    assert!(theorems > 0 && theorems < 100);
    assert!(start.elapsed().as_secs_f64() < 30.0);
}

#[test]
fn used_axioms_suffice_on_their_own() {
    let mut r = rng(77);
    for _ in 0..100 {
        let (premises, goal) = random_prop_obligation(&mut r);
        let run = prove_formulas(&premises, Some(&goal), &Limits::checker());
        if run.status != SzsStatus::Theorem {
            continue;
        }
        let used = run.used_axioms.unwrap_or_default();
        let kept: Vec<NamedFormula> = premises.iter().filter(|p| used.contains(&p.name)).cloned().collect();
        assert!(entails(&formulas(&kept), &goal.formula));
        assert_eq!(prove_formulas(&kept, Some(&goal), &Limits::checker()).status, SzsStatus::Theorem);
    }
}
