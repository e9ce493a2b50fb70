use std::f64::consts::PI;

use hspec_core::specfun::{bernoulli, gamma, gauss_2f1, gauss_2f1_derivative, log_gamma};
use hspec_core::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Stirling series after shifting the argument up by the recurrence.
fn log_gamma_oracle(z: Complex64) -> Complex64 {
    // B_{2k} / (2k (2k - 1)) for k = 1..10
    const STIRLING: [f64; 10] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360360.0,
        1.0 / 156.0,
        -3617.0 / 122400.0,
        43867.0 / 244188.0,
        -174611.0 / 125400.0,
    ];
    let shift = 30;
    let mut log_product = c(0.0, 0.0);
    for k in 0..shift {
        log_product += (z + k as f64).ln();
    }
    let w = z + shift as f64;
    let mut series = (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln();
    let inv2 = 1.0 / (w * w);
    let mut power = 1.0 / w;
    for coeff in STIRLING {
        series += coeff * power;
        power *= inv2;
    }
    series - log_product
}

#[test]
fn log_gamma_reference_values() {
    assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
    let half = log_gamma(c(0.5, 0.0)).unwrap();
    assert!((half - c(0.5 * PI.ln(), 0.0)).norm() < 1e-15);

    let z = c(1.0, 1.0);
    let got = log_gamma(z).unwrap();
    let oracle = log_gamma_oracle(z);
    assert!((got - oracle).norm() < 1e-13, "{got} vs {oracle}");
    // frozen oracle value
    let frozen = c(-0.650_923_199_301_856_3, -0.301_640_320_467_533_2);
    assert!((got - frozen).norm() < 1e-13);
    assert!((oracle - frozen).norm() < 1e-13);
}

#[test]
fn gamma_matches_oracle_away_from_origin() {
    for z in [c(3.5, -7.0), c(12.0, 20.0), c(0.7, 0.1), c(25.0, -30.0)] {
        let got = log_gamma(z).unwrap();
        let oracle = log_gamma_oracle(z);
        let diff = got - oracle;
        // the imaginary parts may differ by a multiple of 2π
        let wrapped = diff.im - 2.0 * PI * (diff.im / (2.0 * PI)).round();
        assert!(diff.re.abs() < 1e-12 && wrapped.abs() < 1e-11, "{z}: {diff}");
    }
    let left = gamma(c(-2.5, 0.0)).unwrap();
    assert!((left.re + 8.0 * PI.sqrt() / 15.0).abs() < 1e-14);
}

#[test]
fn gamma_poles_are_errors() {
    for z in [0.0, -1.0, -7.0] {
        assert!(matches!(log_gamma(c(z, 0.0)), Err(Error::Pole(_))));
    }
    assert!(log_gamma(c(-1.0, 1e-6)).is_ok());
}

#[test]
fn series_oracle_for_log_closed_form() {
    let z = -0.5_f64;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= z * k as f64 / (k + 1) as f64;
        sum += term;
    }
    let got = gauss_2f1(c(1.0, 0.0), c(1.0, 0.0), c(2.0, 0.0), z).unwrap();
    assert!((got.re - sum).abs() < 1e-15);
    assert!((got.re + (1.0 - z).ln() / z).abs() < 1e-15);
    assert!(got.im == 0.0);
}

#[test]
fn symmetric_in_numerator_parameters() {
    let (a, b, cc) = (c(1.0, 2.0), c(1.0, -2.0), c(2.0, 0.0));
    let ab = gauss_2f1(a, b, cc, -3.0).unwrap();
    let ba = gauss_2f1(b, a, cc, -3.0).unwrap();
    assert!((ab - ba).norm() < 1e-14);
    assert!((ab - c(-0.061_467_712_084_184_10, 0.0)).norm() < 1e-13);
}

#[test]
fn derivative_reference_values() {
    let (a, b, cc) = (c(1.0, 2.0), c(0.5, -1.0), c(3.0, 0.5));
    assert!((gauss_2f1_derivative(a, b, cc, 0.0).unwrap() - a * b / cc).norm() < 1e-15);

    let one = c(1.0, 0.0);
    let z = -0.5_f64;
    let closed = (z / (1.0 - z) + (1.0 - z).ln()) / (z * z);
    let got = gauss_2f1_derivative(one, one, c(2.0, 0.0), z).unwrap();
    assert!((got.re - closed).abs() < 1e-14);

    let (a, b, cc) = (c(1.0, 1.0), c(1.0, -1.0), c(2.0, 0.0));
    let step = 1e-5;
    let fd = (gauss_2f1(a, b, cc, -2.0 + step).unwrap() - gauss_2f1(a, b, cc, -2.0 - step).unwrap()) / (2.0 * step);
    let exact = gauss_2f1_derivative(a, b, cc, -2.0).unwrap();
    assert!((fd - exact).norm() < 1e-6 * exact.norm());
    assert!((exact - c(0.132_221_310_730_093_63, 0.0)).norm() < 1e-13);
}

#[test]
fn forbidden_denominator_parameter() {
    let one = c(1.0, 0.0);
    assert!(matches!(gauss_2f1(one, one, c(-3.0, 0.0), -1.0), Err(Error::Parameter(_))));
    assert!(matches!(gauss_2f1_derivative(one, one, c(0.0, 0.0), -1.0), Err(Error::Parameter(_))));
    assert!(matches!(gauss_2f1(one, one, c(2.0, 0.0), 0.5), Err(Error::Parameter(_))));
}

#[test]
fn bernoulli_values_and_range() {
    assert_eq!(bernoulli(2).unwrap(), 1.0 / 6.0);
    assert_eq!(bernoulli(4).unwrap(), -1.0 / 30.0);
    assert!((bernoulli(20).unwrap() + 174611.0 / 330.0).abs() < 1e-12);
    for k in [0, 3, 66] {
        assert!(matches!(bernoulli(k), Err(Error::Range(_))));
    }
}

fn parameter() -> impl Strategy<Value = Complex64> {
    (-3.0..3.0_f64, -5.0..5.0_f64).prop_map(|(re, im)| c(re, im))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hypergeometric_ode_residual(
        a in parameter(),
        b in parameter(),
        c_re in 0.5..4.0_f64,
        c_im in -3.0..3.0_f64,
        z in -100.0..-0.01_f64,
    ) {
        let cc = c(c_re, c_im);
        let f = gauss_2f1(a, b, cc, z).unwrap();
        let d = |x: f64| gauss_2f1_derivative(a, b, cc, x).unwrap();
        let h = 1e-4 * z.abs();
        let second = (d(z - 2.0 * h) - 8.0 * d(z - h) + 8.0 * d(z + h) - d(z + 2.0 * h)) / (12.0 * h);
        let residual = z * (1.0 - z) * second + (cc - (a + b + 1.0) * z) * d(z) - a * b * f;
        prop_assert!(residual.norm() <= 1e-8 * f.norm().max(1.0), "residual {} at F = {}", residual.norm(), f);
    }

    #[test]
    fn conjugate_parameters_conjugate_value(
        a in parameter(),
        b in parameter(),
        c_re in 0.5..4.0_f64,
        c_im in -3.0..3.0_f64,
        z in -50.0..0.0_f64,
    ) {
        let cc = c(c_re, c_im);
        let f = gauss_2f1(a, b, cc, z).unwrap();
        let g = gauss_2f1(a.conj(), b.conj(), cc.conj(), z).unwrap();
        prop_assert!((g - f.conj()).norm() <= 1e-12 * f.norm().max(1.0));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn log_gamma_recurrence(re in 0.01..20.0_f64, im in -20.0..20.0_f64) {
        let z = c(re, im);
        prop_assume!(z.norm() <= 20.0);
        let ratio = (log_gamma(z + 1.0).unwrap() - log_gamma(z).unwrap() - z.ln()).exp();
        prop_assert!((ratio - 1.0).norm() < 1e-11);
    }
}
