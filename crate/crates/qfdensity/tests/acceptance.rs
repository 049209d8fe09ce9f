//! Acceptance gate: the eleven cross-check families, each over its full
//! pinned grid (no clamps). One test per family so the harness prints one
//! pass/fail line per criterion; each also echoes a headline with the check
//! count and wall time for the log.
//!
//! Heavy grids (families 1-4) enumerate millions of lattice points; the
//! workspace profiles compile tests at opt-level 2 so the whole gate stays
//! within its runtime budget.

use qfdensity::verify::{self, FamilyReport, VerifyConfig};

fn gate(report: FamilyReport) {
    println!("{}", report.headline());
    assert!(
        report.checked > 0,
        "criterion {} ran zero checks",
        report.number
    );
    assert!(
        report.passed(),
        "criterion {} ({}): {} of {} checks failed; first failures:\n  {}",
        report.number,
        report.name,
        report.failure_count,
        report.checked,
        report.failures.join("\n  ")
    );
}

fn full() -> VerifyConfig {
    VerifyConfig::default()
}

#[test]
fn criterion_01_closed_form_matches_bruteforce_exactly() {
    gate(verify::closed_form_vs_bruteforce(&full()));
}

#[test]
fn criterion_02_counts_stabilize_one_depth_past_the_target_valuation() {
    gate(verify::stabilization(&full()));
}

#[test]
fn criterion_03_three_evaluators_agree() {
    gate(verify::three_evaluator_agreement(&full()));
}

#[test]
fn criterion_04_null_target_counts_and_their_limit() {
    gate(verify::null_target_counts(&full()));
}

#[test]
fn criterion_05_unramified_closed_form_exhaustive() {
    gate(verify::unramified_agreement(&full()));
}

#[test]
fn criterion_06_anisotropic_shape_oracle() {
    gate(verify::anisotropic_oracle(&full()));
}

#[test]
fn criterion_07_gauss_sums_exact_vs_float() {
    gate(verify::gauss_exact_vs_float(&full()));
}

#[test]
fn criterion_08_character_sum_closed_forms() {
    gate(verify::character_sum_closed_forms(&full()));
}

#[test]
fn criterion_09_binary_form_consistency() {
    gate(verify::binary_consistency(&full()));
}

#[test]
fn criterion_10_crt_multiplicativity() {
    gate(verify::crt_multiplicativity(&full()));
}

#[test]
fn criterion_11_frozen_spot_values() {
    gate(verify::frozen_spot_values(&full()));
}
