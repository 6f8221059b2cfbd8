//! Acceptance suite: every gate criterion as its own test, printing one
//! pass/fail line with the measured value against the pinned threshold.
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use muskat_core::checks::{self, CheckOutcome};
use muskat_core::quadrature::QuadParams;
use muskat_core::SpectralGrid;

fn report(criterion: &str, out: &CheckOutcome) {
    println!(
        "ACCEPTANCE {criterion}: {} — {} (measured {:.3e} vs threshold {:.3e}; {})",
        if out.passed { "PASS" } else { "FAIL" },
        out.name,
        out.measured,
        out.threshold,
        out.detail
    );
    assert!(
        out.passed,
        "criterion {criterion} failed: measured {:.6e} vs threshold {:.6e} ({})",
        out.measured, out.threshold, out.detail
    );
}

#[test]
fn criterion_01_determinant_identity() {
    report("1", &checks::determinant_identity(200, 0xC0FFEE));
}

#[test]
fn criterion_02_bochner_positivity() {
    report("2", &checks::bochner_positivity(200, 0xBEEF));
}

#[test]
fn criterion_03_zero_xi_spectrum() {
    report("3", &checks::zero_xi_spectrum(200, 0xFEED));
}

#[test]
fn criterion_04_asymptotics() {
    report("4", &checks::asymptotics(50, 0xACE));
}

#[test]
fn criterion_05_multiplier_consistency() {
    let grid = SpectralGrid::new(20.0, 4096).unwrap();
    let qp = QuadParams::default(); // M = 8 with analytic image completion
    report(
        "5",
        &checks::multiplier_consistency(&checks::reference_config(), &grid, &qp),
    );
}

#[test]
fn criterion_06_rhs_decomposition() {
    let grid = SpectralGrid::new(12.0, 256).unwrap();
    report(
        "6",
        &checks::rhs_decomposition(20, 0xD15C, &grid, &QuadParams::default()),
    );
}

#[test]
fn criterion_07_dual_nonlinear_and_coefficient_bound() {
    let grid = SpectralGrid::new(12.0, 256).unwrap();
    report("7a", &checks::dual_nonlinear(&grid, 8));
    report("7b", &checks::b_coefficient_bound());
}

#[test]
fn criterion_08_energy_monotonicity() {
    report("8", &checks::energy_monotonicity(2048, 1e3, 1e-3));
}

#[test]
fn criterion_09_decay_exponents() {
    let lin = checks::linear_decay_run();
    let pass0 = lin.beta0 >= 0.25 && lin.beta0 <= 0.35;
    let diff = lin.beta1 - lin.beta0;
    let pass_diff = (0.45..=0.55).contains(&diff);
    println!(
        "ACCEPTANCE 9a: {} — linear decay beta_hat(s=0) = {:.4} (target [0.25, 0.35]), \
         beta_hat(s=1) - beta_hat(s=0) = {:.4} (target [0.45, 0.55]), {} samples",
        if pass0 && pass_diff { "PASS" } else { "FAIL" },
        lin.beta0,
        diff,
        lin.record_len
    );
    assert!(pass0, "beta0 = {}", lin.beta0);
    assert!(pass_diff, "beta1 - beta0 = {diff}");

    let nl = checks::nonlinear_decay_run();
    let pass_nl = nl.beta0 >= 0.24;
    println!(
        "ACCEPTANCE 9b: {} — nonlinear decay beta_hat(s=0) = {:.4} (target >= 0.24), {} samples",
        if pass_nl { "PASS" } else { "FAIL" },
        nl.beta0,
        nl.record_len
    );
    assert!(pass_nl, "nonlinear beta0 = {}", nl.beta0);
}

#[test]
fn criterion_10_bound_ratio_stability() {
    let grid = SpectralGrid::new(20.0, 512).unwrap();
    report("10", &checks::bound_ratio_stability(&grid));
}

#[test]
fn criterion_11_periodization_convergence() {
    let out = checks::periodization_convergence();
    println!(
        "ACCEPTANCE 11: {} — {} (reduction factor {:.2} vs required {:.1}; {})",
        if out.passed { "PASS" } else { "FAIL" },
        out.name,
        out.measured,
        out.threshold,
        out.detail
    );
    assert!(out.passed, "{}", out.detail);
}
