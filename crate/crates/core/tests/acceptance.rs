//! Acceptance suite: one test per criterion, each printing a pass/fail
//! line. Every expected value is exact; tolerances are zero throughout.

use std::time::{Duration, Instant};

use simplex_bound::selftest::{
    closed_form_suite, consistency_suite, family_suite, induction_suite, lemma_bounds_suite,
    micro_instance_suite, soundness_suite, SuiteOutcome,
};

fn report(criterion: usize, name: &str, outcome: &SuiteOutcome, elapsed: Duration, budget: Duration) {
    let status = if outcome.passed() && elapsed <= budget { "PASS" } else { "FAIL" };
    println!(
        "ACCEPTANCE {criterion} ({name}): {status} [{} checks, {} failures, {:.2?}]",
        outcome.checked,
        outcome.failures.len(),
        elapsed
    );
    for failure in &outcome.failures {
        println!("  failure: {failure}");
    }
    assert!(outcome.passed(), "criterion {criterion} failed: {:?}", outcome.failures);
    assert!(
        elapsed <= budget,
        "criterion {criterion} exceeded its time budget: {elapsed:.2?} > {budget:.2?}"
    );
}

#[test]
fn criterion_1_worked_micro_instance() {
    let start = Instant::now();
    let outcome = micro_instance_suite();
    report(1, "worked micro-instance", &outcome, start.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_2_closed_forms() {
    let start = Instant::now();
    let outcome = closed_form_suite();
    report(2, "closed forms", &outcome, start.elapsed(), Duration::from_secs(1));
}

#[test]
fn criterion_3_lemma_bound_suites() {
    let start = Instant::now();
    let outcome = lemma_bounds_suite(50, 0x5eed_0003);
    report(3, "lemma degree/size bounds", &outcome, start.elapsed(), Duration::from_secs(300));
}

#[test]
fn criterion_4_oracle_equivalence_and_structure() {
    let start = Instant::now();
    let outcome = consistency_suite(50, 0x5eed_0004);
    report(4, "oracle equivalence and structure", &outcome, start.elapsed(), Duration::from_secs(300));
}

#[test]
fn criterion_5_soundness_against_grid() {
    let start = Instant::now();
    let outcome = soundness_suite(20, 0x5eed_0005, &[50, 100]);
    report(5, "soundness against the grid oracle", &outcome, start.elapsed(), Duration::from_secs(600));
}

#[test]
fn criterion_6_doubly_exponential_family() {
    let start = Instant::now();
    let outcome = family_suite(&[(1, 4, 2), (1, 4, 4), (2, 4, 2)]);
    report(6, "doubly exponential family", &outcome, start.elapsed(), Duration::from_secs(600));
}

#[test]
fn criterion_7_induction_inequality() {
    let start = Instant::now();
    let outcome = induction_suite(4, 3, 8);
    report(7, "recursion-closing inequality", &outcome, start.elapsed(), Duration::from_secs(60));
}
