use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};

const LANCZOS_G: f64 = 7.0;
const LANCZOS_COEFFS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

const POLE_TOLERANCE: f64 = 1e-14;

/// Log-gamma for complex arguments.
///
/// Lanczos approximation (g = 7, nine coefficients) on `Re z >= 1/2`, the
/// reflection formula elsewhere. On the right half-plane the imaginary part is
/// the continuous branch that vanishes on the positive real axis; on the
/// reflected side only `exp(log_gamma(z)) = Γ(z)` is guaranteed.
pub fn log_gamma(z: Complex64) -> Result<Complex64> {
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(Error::Parameter(format!("log_gamma of non-finite {z}")));
    }
    if is_non_positive_integer(z) {
        return Err(Error::Pole(format!("Γ has a pole at z = {z}")));
    }
    if z.re < 0.5 {
        let reflected = lanczos(Complex64::new(1.0, 0.0) - z);
        Ok(Complex64::new(PI.ln(), 0.0) - ln_sin_pi(z) - reflected)
    } else {
        Ok(lanczos(z))
    }
}

/// `Γ(z)`, evaluated as `exp(log_gamma(z))`.
pub fn gamma(z: Complex64) -> Result<Complex64> {
    log_gamma(z).map(|l| l.exp())
}

fn is_non_positive_integer(z: Complex64) -> bool {
    let nearest = z.re.round();
    nearest <= 0.0 && (z - nearest).norm() < POLE_TOLERANCE
}

fn lanczos(z: Complex64) -> Complex64 {
    let z = z - 1.0;
    let mut sum = Complex64::new(LANCZOS_COEFFS[0], 0.0);
    for (i, &coeff) in LANCZOS_COEFFS.iter().enumerate().skip(1) {
        sum += coeff / (z + i as f64);
    }
    let t = z + LANCZOS_G + 0.5;
    0.5 * (2.0 * PI).ln() + (z + 0.5) * t.ln() - t + sum.ln()
}

/// `ln sin(πz)` without overflow for large `|Im z|`.
fn ln_sin_pi(z: Complex64) -> Complex64 {
    let i = Complex64::i();
    let ln_2i = Complex64::new(2.0_f64.ln(), PI / 2.0);
    if z.im > 20.0 {
        // sin(πz) = -e^{-iπz} (1 - e^{2iπz}) / (2i)
        -i * PI * z - ln_2i + (1.0 - (2.0 * i * PI * z).exp()).ln() + Complex64::new(0.0, PI)
    } else if z.im < -20.0 {
        // sin(πz) = e^{iπz} (1 - e^{-2iπz}) / (2i)
        i * PI * z - ln_2i + (1.0 - (-2.0 * i * PI * z).exp()).ln()
    } else {
        (PI * z).sin().ln()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn trivial_values() {
        assert!(log_gamma(c(1.0, 0.0)).unwrap().norm() < 1e-15);
        assert!(log_gamma(c(2.0, 0.0)).unwrap().norm() < 1e-15);
        let half = log_gamma(c(0.5, 0.0)).unwrap();
        assert_relative_eq!(half.re, PI.sqrt().ln(), epsilon = 1e-15);
        assert!(half.im.abs() < 1e-15);
    }

    #[test]
    fn poles_rejected() {
        for k in 0..5 {
            assert!(matches!(log_gamma(c(-(k as f64), 0.0)), Err(Error::Pole(_))));
        }
        assert!(matches!(log_gamma(c(-3.0 + 1e-15, 0.0)), Err(Error::Pole(_))));
        assert!(log_gamma(c(-3.0 + 1e-6, 0.0)).is_ok());
    }

    #[test]
    fn reflection_side_matches_factorial_shift() {
        // Γ(-1/2) = -2√π
        let g = gamma(c(-0.5, 0.0)).unwrap();
        assert_relative_eq!(g.re, -2.0 * PI.sqrt(), max_relative = 1e-13);
        assert!(g.im.abs() < 1e-13);
    }

    #[test]
    fn imaginary_axis_modulus() {
        // |Γ(iy)|² = π / (y sinh πy)
        for &y in &[0.3, 1.0, 5.0, 40.0, 300.0] {
            let l = log_gamma(c(0.0, y)).unwrap();
            let expected = 0.5 * (PI / y).ln() - 0.5 * ((PI * y).sinh().ln());
            let expected = if y > 100.0 {
                0.5 * (PI / y).ln() - 0.5 * (PI * y - 2.0_f64.ln())
            } else {
                expected
            };
            assert_relative_eq!(l.re, expected, epsilon = 1e-12, max_relative = 1e-13);
        }
    }

    #[test]
    fn large_imaginary_reflection_agrees_with_conjugate() {
        let up = log_gamma(c(0.0, 250.0)).unwrap().exp();
        let down = log_gamma(c(0.0, -250.0)).unwrap().exp();
        // both tiny; compare in log space
        assert_relative_eq!(up.norm().ln(), down.norm().ln(), max_relative = 1e-13);
    }
}
