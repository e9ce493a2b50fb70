//! The `(n, Q)` manifold model: volume density, mean curvature, Ledger
//! coefficients, curvature invariants and entropy bounds.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::specfun::{bernoulli, log_gamma};
use num_complex::Complex64;

/// Largest Ledger coefficient index served by [`ledger_coefficient`].
pub const MAX_LEDGER_INDEX: u32 = 40;

const BOUND_TOLERANCE: f64 = 1e-12;

/// Whether the hypergeometric-type entropy range is enforced at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Enforcement {
    /// Reject `Q` outside `[(n-1)/2, n-1]`.
    #[default]
    Strict,
    /// Accept any `Q > 0`, logging a warning when outside the range.
    Permissive,
}

/// The two real hyperbolic spaces met at the ends of the entropy range.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HyperbolicModel {
    /// `RH^n(-1)`, reached at `Q = n - 1`.
    UnitCurvature,
    /// `RH^n(-1/4)`, reached at `Q = (n - 1)/2`.
    QuarterCurvature,
}

impl HyperbolicModel {
    /// Square root of minus the sectional curvature.
    pub fn curvature_scale(self) -> f64 {
        match self {
            HyperbolicModel::UnitCurvature => 1.0,
            HyperbolicModel::QuarterCurvature => 0.5,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            HyperbolicModel::UnitCurvature => "isometric to RH^n(-1)",
            HyperbolicModel::QuarterCurvature => "isometric to RH^n(-1/4)",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManifoldParams {
    n: u32,
    q: f64,
    enforcement: Enforcement,
}

impl ManifoldParams {
    /// Strict constructor.
    pub fn new(n: u32, q: f64) -> Result<Self> {
        Self::with_enforcement(n, q, Enforcement::Strict)
    }

    pub fn permissive(n: u32, q: f64) -> Result<Self> {
        Self::with_enforcement(n, q, Enforcement::Permissive)
    }

    pub fn with_enforcement(n: u32, q: f64, enforcement: Enforcement) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidParams(format!("dimension n = {n} must be at least 3")));
        }
        if !(q.is_finite() && q > 0.0) {
            return Err(Error::InvalidParams(format!("entropy Q = {q} must be positive")));
        }
        let params = Self { n, q, enforcement };
        if !params.in_hypergeometric_range() {
            let message = format!(
                "Q = {q} outside [{}, {}] for n = {n}",
                params.dim_m1() / 2.0,
                params.dim_m1()
            );
            match enforcement {
                Enforcement::Strict => return Err(Error::InvalidParams(message)),
                Enforcement::Permissive => log::warn!("{message}"),
            }
        }
        Ok(params)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn q(&self) -> f64 {
        self.q
    }

    pub fn enforcement(&self) -> Enforcement {
        self.enforcement
    }

    pub(crate) fn dim_m1(&self) -> f64 {
        f64::from(self.n) - 1.0
    }

    pub fn in_hypergeometric_range(&self) -> bool {
        let m = self.dim_m1();
        self.q >= m / 2.0 * (1.0 - BOUND_TOLERANCE) && self.q <= m * (1.0 + BOUND_TOLERANCE)
    }

    /// The hyperbolic model these parameters describe, if any.
    pub fn hyperbolic_model(&self) -> Option<HyperbolicModel> {
        let m = self.dim_m1();
        if (self.q - m).abs() <= BOUND_TOLERANCE * m {
            Some(HyperbolicModel::UnitCurvature)
        } else if (self.q - m / 2.0).abs() <= BOUND_TOLERANCE * m {
            Some(HyperbolicModel::QuarterCurvature)
        } else {
            None
        }
    }

    /// Area of the unit sphere in `R^n`.
    pub fn sphere_area(&self) -> f64 {
        sphere_area(self.n)
    }

    /// Constant in front of the inversion and Plancherel integrals.
    pub fn plancherel_constant(&self) -> f64 {
        let half_n = f64::from(self.n) / 2.0;
        let log_value = (2.0 * self.q - (f64::from(self.n) + 2.0)) * 2f64.ln() + ln_gamma_real(half_n)
            - (half_n + 1.0) * PI.ln();
        log_value.exp()
    }
}

/// `ω_{k-1} = 2π^{k/2}/Γ(k/2)`, the area of the unit sphere in `R^k`.
pub fn sphere_area(k: u32) -> f64 {
    let half = f64::from(k) / 2.0;
    2.0 * (half * PI.ln() - ln_gamma_real(half)).exp()
}

fn ln_gamma_real(x: f64) -> f64 {
    log_gamma(Complex64::new(x, 0.0)).expect("positive argument").re
}

/// Volume density `Θ(r)` of geodesic spheres.
pub fn volume_density(p: &ManifoldParams, r: f64) -> f64 {
    let half = 0.5 * r.max(0.0);
    let m = p.dim_m1();
    (2.0 * half.sinh()).powf(m) * half.cosh().powf(2.0 * p.q - m)
}

/// Mean curvature of geodesic spheres, `σ(r) = d/dr log Θ(r)`.
pub fn mean_curvature(p: &ManifoldParams, r: f64) -> Result<f64> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(Error::Domain(format!("mean curvature needs r > 0, got {r}")));
    }
    let half = 0.5 * r;
    let m = p.dim_m1();
    Ok(0.5 * m / half.tanh() + (p.q - 0.5 * m) * half.tanh())
}

/// Coefficient `a_m` in `σ(r) = (n-1)/r + Σ a_m r^m/m!`.
pub fn ledger_coefficient(p: &ManifoldParams, m: u32) -> Result<f64> {
    if m == 0 || m > MAX_LEDGER_INDEX {
        return Err(Error::Range(format!(
            "Ledger index {m} outside [1, {MAX_LEDGER_INDEX}]"
        )));
    }
    if m % 2 == 0 {
        return Ok(0.0);
    }
    let two_l = m + 1;
    let b = bernoulli(two_l as usize)?;
    let dm1 = p.dim_m1();
    let growth = 2f64.powi(two_l as i32) - 1.0;
    Ok(b / f64::from(two_l) * (dm1 + (2.0 * p.q - dm1) * growth))
}

/// Trace-level curvature data of the model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvatureInvariants {
    /// Ricci curvature in any unit direction.
    pub ric: f64,
    /// Trace of the squared Jacobi operator.
    pub tr_r2: f64,
    /// Einstein constant.
    pub delta_g: f64,
    pub k_const: f64,
    pub h_const: f64,
    pub l_const: f64,
}

pub fn curvature_invariants(p: &ManifoldParams) -> CurvatureInvariants {
    let m = p.dim_m1();
    let q = p.q;
    let ric = 0.5 * (m - 3.0 * q);
    CurvatureInvariants {
        ric,
        tr_r2: -0.25 * (m + 5.0 * ric),
        delta_g: ric / m,
        k_const: ric,
        h_const: -(7.0 * m - 15.0 * q) / 8.0,
        l_const: 31.0 * m - 63.0 * q,
    }
}

impl CurvatureInvariants {
    /// Entropy recovered from the Ricci curvature.
    pub fn entropy_from_ricci(&self, n: u32) -> f64 {
        (f64::from(n) - 1.0 - 2.0 * self.ric) / 3.0
    }
}

/// Outcome of one inequality in [`EntropyReport`].
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    pub passed: bool,
    /// Signed margin; non-negative when the bound holds.
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyReport {
    pub n: u32,
    pub q: f64,
    /// `|δ_g|` reconstructed from `Q = (n-1)(1 + 2|δ_g|)/3`.
    pub delta_abs: f64,
    pub checks: Vec<BoundCheck>,
    pub equality: Option<HyperbolicModel>,
}

impl EntropyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

/// Check the entropy bounds; failures are reported, never raised.
pub fn validate_entropy(p: &ManifoldParams) -> EntropyReport {
    let m = p.dim_m1();
    let q = p.q;
    let delta_abs = (3.0 * q / m - 1.0) / 2.0;
    let tol = BOUND_TOLERANCE * m.max(1.0);
    let mut checks = Vec::new();
    let mut push = |name, margin: f64| checks.push(BoundCheck { name, passed: margin >= -tol, margin });
    push("Q <= (n-1) sqrt|delta_g|", m * delta_abs.max(0.0).sqrt() - q);
    push("|delta_g| >= 1/4", delta_abs - 0.25);
    push("|delta_g| <= 1", 1.0 - delta_abs);
    push("Q >= (n-1)/2", q - m / 2.0);
    push("Q <= n-1", m - q);
    let passed = checks.iter().all(|c| c.passed);
    EntropyReport {
        n: p.n,
        q,
        delta_abs,
        checks,
        equality: if passed { p.hyperbolic_model() } else { None },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constructor_rules() {
        assert!(ManifoldParams::new(2, 1.0).is_err());
        assert!(ManifoldParams::new(3, 0.0).is_err());
        assert!(ManifoldParams::new(3, 2.5).is_err());
        assert!(ManifoldParams::permissive(3, 2.5).is_ok());
        assert!(ManifoldParams::new(3, 1.0).is_ok());
    }

    #[test]
    fn hyperbolic_three_space() {
        let p = ManifoldParams::new(3, 2.0).unwrap();
        for r in [0.1, 1.0, 3.7, 12.0] {
            let theta = volume_density(&p, r);
            assert!((theta / r.sinh().powi(2) - 1.0).abs() < 1e-14);
            let sigma = mean_curvature(&p, r).unwrap();
            assert!((sigma - 2.0 / r.tanh()).abs() < 1e-13);
        }
        assert!((p.plancherel_constant() - 1.0 / (4.0 * PI * PI)).abs() < 1e-16);
        assert!((ledger_coefficient(&p, 1).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert_eq!(curvature_invariants(&p).delta_g, -1.0);
        assert_eq!(volume_density(&p, 0.0), 0.0);
        assert!(matches!(mean_curvature(&p, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn sphere_areas() {
        assert!((sphere_area(2) - 2.0 * PI).abs() < 1e-14);
        assert!((sphere_area(3) - 4.0 * PI).abs() < 1e-13);
        assert!((sphere_area(4) - 2.0 * PI * PI).abs() < 1e-13);
    }

    #[test]
    fn ledger_range() {
        let p = ManifoldParams::new(4, 2.0).unwrap();
        assert!(matches!(ledger_coefficient(&p, 0), Err(Error::Range(_))));
        assert!(matches!(ledger_coefficient(&p, 41), Err(Error::Range(_))));
        for m in (2..=40).step_by(2) {
            assert_eq!(ledger_coefficient(&p, m).unwrap(), 0.0);
        }
    }

    #[test]
    fn entropy_examples() {
        let dr = validate_entropy(&ManifoldParams::new(4, 2.0).unwrap());
        assert!(dr.passed());
        assert_eq!(dr.equality, None);
        let rh = validate_entropy(&ManifoldParams::new(3, 2.0).unwrap());
        assert!(rh.passed());
        assert_eq!(rh.equality, Some(HyperbolicModel::UnitCurvature));
        let quarter = validate_entropy(&ManifoldParams::new(5, 2.0).unwrap());
        assert_eq!(quarter.equality, Some(HyperbolicModel::QuarterCurvature));
        let bad = validate_entropy(&ManifoldParams::permissive(3, 2.5).unwrap());
        assert!(!bad.passed());
        assert!(!bad.checks.iter().find(|c| c.name == "Q <= n-1").unwrap().passed);
    }
}
