//! Gauss hypergeometric function `F(a, b, c; z)` for complex parameters and
//! real `z <= 0`.
//!
//! Three evaluation strategies, tried in this order:
//!
//! 1. the defining power series for `z >= -1/2`;
//! 2. the Pfaff transformation `F(a,b,c;z) = (1-z)^{-a} F(a, c-b, c; z/(z-1))`
//!    for `z < -1/2`, as long as the new argument stays below `0.95`;
//! 3. analytic continuation of the hypergeometric ODE by Taylor re-expansion
//!    along the negative axis.
//!
//! A series result is rejected when the largest term exceeds the sum by more
//! than [`LOSS_LIMIT`]; large `|ab|` (big spectral parameters) makes the power
//! series alternate through huge intermediate terms, and continuation then
//! takes over. Continuation keeps every step inside a disc where the local
//! solution is non-oscillatory, so it holds full precision for any `|ab|`.

use num_complex::Complex64;

use crate::error::{Error, Result};

const SERIES_REL_TOL: f64 = 1e-16;
const SERIES_MAX_TERMS: usize = 10_000;
const SERIES_QUIET_TERMS: usize = 3;
/// Largest tolerated ratio between the biggest series term and the sum.
const LOSS_LIMIT: f64 = 1e3;
/// Beyond this Pfaff argument the series is too slow; continue instead.
const PFAFF_LIMIT: f64 = 0.95;
const DIRECT_LIMIT: f64 = -0.5;

const TAYLOR_MAX_TERMS: usize = 90;
const TAYLOR_REL_TOL: f64 = 1e-18;
const COEFF_CHUNK: usize = 8;
/// Step length in units of the inverse local growth rate.
const STEP_SCALE: f64 = 2.5;
const MAX_STEPS: usize = 2_000_000;

const PARAM_TOLERANCE: f64 = 1e-14;

/// `F(a, b, c; z)` for `z <= 0`.
pub fn gauss_2f1(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    check_arguments(a, b, c, z)?;
    if z == 0.0 {
        return Ok(Complex64::new(1.0, 0.0));
    }
    if z >= DIRECT_LIMIT {
        if let Some(value) = reliable_series(a, b, c, z) {
            return Ok(value);
        }
    } else {
        let w = z / (z - 1.0);
        if w <= PFAFF_LIMIT {
            if let Some(value) = reliable_series(a, c - b, c, w) {
                return Ok(value * (-a * (1.0 - z).ln()).exp());
            }
        }
    }
    let path = HypergeometricPath::build(a, b, c, z)?;
    Ok(path.eval(z)?.0)
}

/// `dF/dz` through the contiguous relation `F' = (ab/c) F(a+1, b+1, c+1; z)`.
pub fn gauss_2f1_derivative(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<Complex64> {
    check_arguments(a, b, c, z)?;
    let one = Complex64::new(1.0, 0.0);
    let shifted = gauss_2f1(a + one, b + one, c + one, z)?;
    Ok(a * b / c * shifted)
}

fn check_arguments(a: Complex64, b: Complex64, c: Complex64, z: f64) -> Result<()> {
    let finite = |w: Complex64| w.re.is_finite() && w.im.is_finite();
    if !(finite(a) && finite(b) && finite(c)) {
        return Err(Error::Parameter("non-finite hypergeometric parameter".into()));
    }
    if !z.is_finite() || z > 0.0 {
        return Err(Error::Parameter(format!("argument must satisfy z <= 0, got {z}")));
    }
    let nearest = c.re.round();
    if nearest <= 0.0 && (c - nearest).norm() < PARAM_TOLERANCE {
        return Err(Error::Parameter(format!("c = {c} is a non-positive integer")));
    }
    Ok(())
}

struct SeriesSum {
    value: Complex64,
    max_term: f64,
    converged: bool,
}

/// Power series `Σ (a)_k (b)_k / ((c)_k k!) x^k`.
fn power_series(a: Complex64, b: Complex64, c: Complex64, x: f64) -> SeriesSum {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut max_term = 1.0_f64;
    let mut quiet = 0;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        term *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0)) * x;
        sum += term;
        let size = term.norm();
        if !(size < f64::MAX / 1e3) {
            break;
        }
        max_term = max_term.max(size);
        if size <= SERIES_REL_TOL * sum.norm() {
            quiet += 1;
            if quiet >= SERIES_QUIET_TERMS {
                return SeriesSum { value: sum, max_term, converged: true };
            }
        } else {
            quiet = 0;
        }
    }
    SeriesSum { value: sum, max_term, converged: false }
}

fn reliable_series(a: Complex64, b: Complex64, c: Complex64, x: f64) -> Option<Complex64> {
    let s = power_series(a, b, c, x);
    if s.converged && s.value.norm().is_finite() && s.max_term <= LOSS_LIMIT * s.value.norm() {
        Some(s.value)
    } else {
        None
    }
}

/// Local Taylor expansion `Σ coeffs[k] (z - center)^k`, valid for
/// `z ∈ [center - reach, center]`.
#[derive(Debug, Clone)]
struct Patch {
    center: f64,
    reach: f64,
    coeffs: Vec<Complex64>,
}

impl Patch {
    fn eval(&self, z: f64) -> (Complex64, Complex64) {
        let s = z - self.center;
        let mut value = Complex64::new(0.0, 0.0);
        let mut deriv = Complex64::new(0.0, 0.0);
        for (k, &ck) in self.coeffs.iter().enumerate().rev() {
            if k > 0 {
                deriv = deriv * s + ck * k as f64;
            }
            value = value * s + ck;
        }
        (value, deriv)
    }
}

/// Dense representation of `F(a, b, c; ·)` on `[z_end, 0]`.
///
/// Built once by Taylor continuation of the hypergeometric ODE, then
/// evaluated anywhere on the interval (value and `z`-derivative) at the cost
/// of one polynomial evaluation. This is what makes tabulating spherical
/// functions at large spectral parameters affordable.
#[derive(Debug, Clone)]
pub struct HypergeometricPath {
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z_end: f64,
    patches: Vec<Patch>,
}

impl HypergeometricPath {
    /// Continue `F(a, b, c; z)` from the origin down to `z_end <= 0`.
    pub fn build(a: Complex64, b: Complex64, c: Complex64, z_end: f64) -> Result<Self> {
        check_arguments(a, b, c, z_end)?;
        let start = series_reach(a, b, c).min(-z_end.min(0.0)).max(0.0);
        let origin = origin_patch(a, b, c, start)?;
        let mut patches = vec![origin];
        let mut z0 = -start;
        let (mut f0, mut d0) = patches[0].eval(z0);
        let mut steps = 0;
        while z0 > z_end {
            steps += 1;
            if steps > MAX_STEPS {
                return Err(Error::Convergence(format!(
                    "continuation of 2F1({a}, {b}; {c}) to z = {z_end} exceeded {MAX_STEPS} steps"
                )));
            }
            let patch = taylor_step(a, b, c, z0, f0, d0, z0 - z_end)?;
            let z1 = patch.center - patch.reach;
            let (f1, d1) = patch.eval(z1);
            patches.push(patch);
            z0 = z1;
            f0 = f1;
            d0 = d1;
        }
        Ok(Self { a, b, c, z_end, patches })
    }

    pub fn parameters(&self) -> (Complex64, Complex64, Complex64) {
        (self.a, self.b, self.c)
    }

    /// Left end of the covered interval.
    pub fn z_end(&self) -> f64 {
        self.z_end
    }

    /// Number of Taylor patches, including the origin series.
    pub fn len(&self) -> usize {
        self.patches.len()
    }

    pub fn is_empty(&self) -> bool {
        self.patches.is_empty()
    }

    /// `(F(z), F'(z))` for `z` in `[z_end, 0]`.
    pub fn eval(&self, z: f64) -> Result<(Complex64, Complex64)> {
        if !(z <= 0.0 && z >= self.z_end - 1e-12 * self.z_end.abs()) {
            return Err(Error::Domain(format!(
                "z = {z} outside the continued interval [{}, 0]",
                self.z_end
            )));
        }
        // patches are ordered by decreasing center; find the first one reaching z
        let idx = self
            .patches
            .partition_point(|p| p.center - p.reach > z)
            .min(self.patches.len() - 1);
        Ok(self.patches[idx].eval(z))
    }
}

/// Radius around the origin where the plain power series has no significant
/// cancellation: the term ratio stays below one.
fn series_reach(a: Complex64, b: Complex64, c: Complex64) -> f64 {
    let mut worst: f64 = 1.0;
    for k in 0..400 {
        let kf = k as f64;
        let ratio = ((a + kf) * (b + kf) / ((c + kf) * (kf + 1.0))).norm();
        worst = worst.max(ratio);
    }
    (0.25_f64).min(1.0 / worst)
}

fn origin_patch(a: Complex64, b: Complex64, c: Complex64, reach: f64) -> Result<Patch> {
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    if reach == 0.0 {
        return Ok(Patch { center: 0.0, reach, coeffs });
    }
    let mut coeff = coeffs[0];
    let mut total = 1.0;
    let mut quiet = 0;
    for k in 0..SERIES_MAX_TERMS {
        let kf = k as f64;
        coeff *= (a + kf) * (b + kf) / ((c + kf) * (kf + 1.0));
        coeffs.push(coeff);
        let size = coeff.norm() * reach.powi(k as i32 + 1);
        total += size;
        if size <= TAYLOR_REL_TOL * total {
            quiet += 1;
            if quiet >= SERIES_QUIET_TERMS {
                return Ok(Patch { center: 0.0, reach, coeffs });
            }
        } else {
            quiet = 0;
        }
    }
    Err(Error::Convergence(format!(
        "origin series of 2F1({a}, {b}; {c}) did not settle at |z| = {reach}"
    )))
}

/// One continuation step from `z0` towards more negative `z`.
fn taylor_step(
    a: Complex64,
    b: Complex64,
    c: Complex64,
    z0: f64,
    f0: Complex64,
    d0: Complex64,
    remaining: f64,
) -> Result<Patch> {
    // z(1-z) F'' + (c - (a+b+1) z) F' - ab F = 0, expanded at z0 in s = z - z0
    let p0 = z0 * (1.0 - z0);
    let p1 = 1.0 - 2.0 * z0;
    let p2 = -1.0;
    let q0 = c - (a + b + 1.0) * z0;
    let q1 = -(a + b + 1.0);
    let ab = a * b;

    // local exponential rates: roots of p0 m² + q0 m - ab = 0
    let disc = (q0 * q0 + 4.0 * p0 * ab).sqrt();
    let rate = ((-q0 + disc) / (2.0 * p0)).norm().max(((-q0 - disc) / (2.0 * p0)).norm());
    let singular_distance = z0.abs().min((1.0 - z0).abs());
    let mut reach = remaining.min(0.5 * singular_distance);
    if rate > 0.0 {
        reach = reach.min(STEP_SCALE / rate);
    }

    let next = |coeffs: &[Complex64], k: usize| {
        let kf = k as f64;
        -((p1 * kf + q0) * (kf + 1.0) * coeffs[k + 1] + (p2 * kf * (kf - 1.0) + q1 * kf - ab) * coeffs[k])
            / (p0 * (kf + 2.0) * (kf + 1.0))
    };
    let mut coeffs = Vec::with_capacity(TAYLOR_MAX_TERMS);
    coeffs.push(f0);
    coeffs.push(d0);

    // coefficients do not depend on the step, so grow them only as needed and
    // shrink the step once the cap is reached
    for _ in 0..60 {
        loop {
            if let Some(len) = settled_length(&coeffs, reach) {
                coeffs.truncate(len);
                return Ok(Patch { center: z0, reach, coeffs });
            }
            if coeffs.len() >= TAYLOR_MAX_TERMS {
                break;
            }
            let target = (coeffs.len() + COEFF_CHUNK).min(TAYLOR_MAX_TERMS);
            while coeffs.len() < target {
                let value = next(&coeffs, coeffs.len() - 2);
                coeffs.push(value);
            }
        }
        reach *= 0.5;
    }
    Err(Error::Convergence(format!(
        "Taylor continuation of 2F1({a}, {b}; {c}) stalled at z = {z0}"
    )))
}

fn settled_length(coeffs: &[Complex64], reach: f64) -> Option<usize> {
    let mut total = 0.0;
    let mut power = 1.0;
    let mut quiet = 0;
    for (k, ck) in coeffs.iter().enumerate() {
        let size = ck.norm() * power;
        total += size;
        power *= reach;
        if k >= 4 && size <= TAYLOR_REL_TOL * total {
            quiet += 1;
            if quiet >= 2 {
                return Some(k + 1);
            }
        } else {
            quiet = 0;
        }
    }
    None
}
