use deltaplane_core::asymptotics::*;
use deltaplane_core::profiles::DeformationProfile;
use std::f64::consts::PI;

fn bump() -> DeformationProfile {
    DeformationProfile::bump(1.0, 1.0).unwrap()
}

#[test]
fn dual_representation_across_alpha() {
    let f = bump();
    // reference values from an independent scipy evaluation
    for (alpha, reference) in [(0.5, 1.3455312230561565), (1.0, 4.651038987595492), (2.0, 14.235834529388276)] {
        let m = dalf_momentum(alpha, &f).unwrap();
        let p = dalf_position(alpha, &f, 0.0).unwrap();
        assert!((m.value - reference).abs() < 1e-8 * reference, "alpha {alpha}: {}", m.value);
        assert!((p.value - m.value).abs() <= 1e-3 * m.value, "alpha {alpha}: {} vs {}", p.value, m.value);
        assert_eq!(m.value, m.d1.unwrap() - m.d2.unwrap());
    }
}

#[test]
fn positive_for_nonzero_profiles() {
    for (h, r) in [(1.0, 1.0), (0.3, 2.0), (-2.0, 0.5)] {
        let f = DeformationProfile::bump(h, r).unwrap();
        assert!(dalf_momentum(1.0, &f).unwrap().value > 0.0);
        assert!(dalf_position(1.0, &f, 0.0).unwrap().value > 0.0);
    }
}

#[test]
fn continuous_in_delta() {
    let f = bump();
    let d0 = dalf_position(1.0, &f, 0.0).unwrap().value;
    let gaps: Vec<f64> = [0.4, 0.2, 0.1, 0.05]
        .iter()
        .map(|&d| (dalf_position(1.0, &f, d).unwrap().value - d0).abs())
        .collect();
    assert!(gaps.windows(2).all(|w| w[1] < w[0]), "{gaps:?}");
    assert!(gaps[3] < 0.05 * d0);
}

#[test]
fn implicit_solve_residual_and_monotonicity() {
    let f = bump();
    let mut prev = 0.0;
    for beta in [0.9, 1.0, 1.2] {
        let p = solve_delta_leading(1.0, beta, &f).unwrap();
        let d = dalf_position(1.0, &f, p.delta_pred).unwrap().value;
        let fixed = (-8.0 * PI / (beta * beta * d)).exp();
        assert!((p.delta_pred - fixed).abs() <= 1e-10 * p.delta_pred);
        assert!(p.delta_pred > prev && p.delta_pred < 1.0);
        assert_eq!(p.lambda_pred, -0.25 - p.delta_pred * p.delta_pred);
        prev = p.delta_pred;
    }
}

#[test]
fn leading_exponent_at_small_beta() {
    let f = bump();
    let d0 = dalf_position(1.0, &f, 0.0).unwrap().value;
    let p = solve_delta_leading(1.0, 0.05, &f).unwrap();
    let slope = -0.05f64.powi(2) * p.log_delta;
    assert!((slope - 8.0 * PI / d0).abs() <= 0.02 * 8.0 * PI / d0);
}

#[test]
fn asymptotic_and_implicit_lambda_agree_up_to_continuity() {
    // the two differ only through D(δ) − D(0)
    let f = bump();
    let beta = 1.0;
    let d0 = dalf_momentum(1.0, &f).unwrap().value;
    let p = solve_delta_leading(1.0, beta, &f).unwrap();
    let lam = asymptotic_lambda(1.0, beta, d0);
    let modulus = (p.dalf - d0).abs() / d0;
    let gap = (lam - p.lambda_pred).abs();
    // δ² = exp(−16π/(β²D)); relative change of δ² is ≈ (16π/(β²D))·ΔD/D
    let allowed = (lam + 0.25).abs() * 2.0 * (16.0 * PI / (beta * beta * d0)) * modulus;
    assert!(gap <= allowed + 1e-15, "gap {gap} allowed {allowed}");
}
