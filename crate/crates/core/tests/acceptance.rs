//! End-to-end acceptance checks. Each test prints one PASS/FAIL line.

use burgess_core::suite::{self, CriterionOutcome, SuiteScale, DEFAULT_SEED};

fn report(outcome: CriterionOutcome) -> CriterionOutcome {
    println!(
        "{} criterion {} ({}): {} {:?}",
        if outcome.pass { "PASS" } else { "FAIL" },
        outcome.id,
        outcome.name,
        outcome.detail,
        outcome.metrics
    );
    outcome
}

#[test]
fn criterion_1_character_algebra() {
    let out = report(suite::criterion_character_algebra(
        SuiteScale::Full,
        DEFAULT_SEED,
    ));
    assert!(out.pass, "{}", out.detail);
    assert_eq!(out.metrics["characters"], 99.0 + 3.0 + 2.0);
}

#[test]
fn criterion_2_moment_bound() {
    let out = report(suite::criterion_moment_bound(SuiteScale::Full));
    assert!(out.pass, "{}", out.detail);
    assert_eq!(out.metrics["cases"], 12.0);
    assert!(out.metrics["min_margin"] >= 0.0);
}

#[test]
fn criterion_3_congruence_oracle() {
    let out = report(suite::criterion_congruence_oracle(DEFAULT_SEED));
    assert!(out.pass, "{}", out.detail);
    assert_eq!(out.metrics["instances"], 200.0);
}

#[test]
fn criterion_4_holder_chain() {
    let out = report(suite::criterion_holder_chain(
        SuiteScale::Full,
        DEFAULT_SEED,
    ));
    assert!(out.pass, "{}", out.detail);
}

#[test]
fn criterion_4_holder_chain_override_parameters() {
    let out = report(suite::criterion_holder_chain_override(
        SuiteScale::Full,
        DEFAULT_SEED,
    ));
    assert!(out.pass, "{}", out.detail);
    assert_eq!(out.metrics["evaluated"], 120.0);
}

#[test]
fn criterion_5_rough_density() {
    let out = report(suite::criterion_rough_density(SuiteScale::Full));
    assert!(out.pass, "{}", out.detail);
    let r6 = out.metrics["ratio_u1000000"];
    let v10 = 0.5 * (2.0 / 3.0) * 0.8 * (6.0 / 7.0);
    assert!((r6 - v10 * 10f64.ln()).abs() < 0.01, "{r6}");
}

#[test]
fn criterion_6_collision_ratio() {
    let out = report(suite::criterion_collision_ratio(DEFAULT_SEED));
    assert!(out.pass, "{}", out.detail);
}

#[test]
fn criterion_6_collision_ratio_override_parameters() {
    let out = report(suite::criterion_collision_ratio_override(DEFAULT_SEED));
    assert!(out.pass, "{}", out.detail);
    assert_eq!(out.metrics["max_ratio"], 0.4661833576816026);
}

#[test]
fn criterion_7_polya_vinogradov() {
    let out = report(suite::criterion_polya_vinogradov(SuiteScale::Full));
    assert!(out.pass, "{}", out.detail);
    assert_eq!(out.metrics["primes"], 1228.0);
    assert_eq!(out.metrics["max_ratio"], 0.5557388601882701);
    assert_eq!(out.metrics["argmax_q"], 5.0);
}

#[test]
fn criterion_8_moment_performance() {
    let out = report(suite::criterion_moment_performance(SuiteScale::Full));
    assert!(out.pass, "{}", out.detail);
}

#[test]
fn criterion_9_shape_scan() {
    let out = report(suite::criterion_shape_scan(SuiteScale::Full, DEFAULT_SEED));
    assert!(out.pass, "{}", out.detail);
    assert_eq!(out.metrics["worst_refined_ratio"], 0.6386185494603226);
}
