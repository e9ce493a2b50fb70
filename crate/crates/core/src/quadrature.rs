//! Gauss-Legendre rules and panel-based integration.

use std::f64::consts::PI;
use std::ops::{Add, AddAssign, Mul};
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};

pub const MIN_NODES: usize = 2;
pub const MAX_NODES: usize = 256;
/// Panel cap for [`integrate_adaptive`].
pub const MAX_PANELS: usize = 10_000;
/// Panel cap for [`integrate_halfline`].
pub const MAX_TAIL_PANELS: usize = 1_000;
/// Consecutive negligible panels needed to stop a half-line integral.
pub const QUIET_PANELS: usize = 3;

/// Values that can be integrated: `f64` and `Complex64`.
pub trait Integrand: Copy + Add<Output = Self> + AddAssign + Mul<f64, Output = Self> + Send + Sync {
    fn zero() -> Self;
    fn magnitude(&self) -> f64;
}

impl Integrand for f64 {
    fn zero() -> Self {
        0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Integrand for Complex64 {
    fn zero() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn magnitude(&self) -> f64 {
        self.norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub domain: (f64, f64),
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// The same rule mapped affinely onto `[a, b]`.
    pub fn mapped(&self, a: f64, b: f64) -> QuadratureRule {
        let (lo, hi) = self.domain;
        let scale = (b - a) / (hi - lo);
        QuadratureRule {
            nodes: self.nodes.iter().map(|&x| a + (x - lo) * scale).collect(),
            weights: self.weights.iter().map(|&w| w * scale).collect(),
            domain: (a, b),
        }
    }

    pub fn apply<T: Integrand>(&self, mut f: impl FnMut(f64) -> T) -> T {
        let mut acc = T::zero();
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            acc += f(x) * w;
        }
        acc
    }
}

/// `k`-point Gauss-Legendre rule on `[a, b]`, nodes ascending.
pub fn gauss_legendre(k: usize, a: f64, b: f64) -> Result<QuadratureRule> {
    if !(MIN_NODES..=MAX_NODES).contains(&k) {
        return Err(Error::Range(format!(
            "Gauss-Legendre order {k} outside [{MIN_NODES}, {MAX_NODES}]"
        )));
    }
    if !(a.is_finite() && b.is_finite()) || a >= b {
        return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
    }
    Ok(standard_rule(k).mapped(a, b))
}

fn standard_rule(k: usize) -> QuadratureRule {
    match k {
        16 => rule_16().clone(),
        32 => rule_32().clone(),
        _ => legendre_nodes(k),
    }
}

pub(crate) fn rule_16() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| legendre_nodes(16))
}

pub(crate) fn rule_32() -> &'static QuadratureRule {
    static RULE: OnceLock<QuadratureRule> = OnceLock::new();
    RULE.get_or_init(|| legendre_nodes(32))
}

/// Newton iteration on `P_k` from Chebyshev-like initial guesses.
fn legendre_nodes(k: usize) -> QuadratureRule {
    let mut nodes = vec![0.0; k];
    let mut weights = vec![0.0; k];
    let kf = k as f64;
    for i in 0..k.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (kf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(k, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(k, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[k - 1 - i] = x;
        weights[i] = w;
        weights[k - 1 - i] = w;
    }
    if k % 2 == 1 {
        nodes[k / 2] = 0.0;
    }
    QuadratureRule { nodes, weights, domain: (-1.0, 1.0) }
}

fn legendre_with_derivative(k: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for j in 2..=k {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let d = k as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// 16-point and 32-point estimates on one panel, plus `Σ w |f|` from the finer rule.
fn panel_pair<T: Integrand>(f: &mut impl FnMut(f64) -> T, a: f64, b: f64) -> (T, T, f64) {
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut coarse = T::zero();
    for (&x, &w) in rule_16().nodes.iter().zip(&rule_16().weights) {
        coarse += f(mid + half * x) * (w * half);
    }
    let mut fine = T::zero();
    let mut mass = 0.0;
    for (&x, &w) in rule_32().nodes.iter().zip(&rule_32().weights) {
        let v = f(mid + half * x);
        fine += v * (w * half);
        mass += v.magnitude() * w * half;
    }
    (coarse, fine, mass)
}

/// Adaptive composite Gauss-Legendre on `[a, b]`.
///
/// Starts from `initial_panels` equal panels; a panel is bisected while its
/// 16/32-point estimates differ by more than `tol * (share + |f| mass)`
/// relative to the running total. Panels are processed left to right, so
/// the summation order is fixed.
pub fn integrate_adaptive<T: Integrand>(
    f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    tol: f64,
    initial_panels: usize,
) -> Result<T> {
    Ok(adaptive(f, a, b, tol, initial_panels, None)?.0)
}

/// Like [`integrate_adaptive`], also returning the error estimate (sum of
/// panel differences).
pub fn integrate_adaptive_with_error<T: Integrand>(
    f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    tol: f64,
    initial_panels: usize,
) -> Result<(T, f64)> {
    adaptive(f, a, b, tol, initial_panels, None)
}

/// The panels accepted by [`integrate_adaptive`] for `f`, left to right.
///
/// Used to freeze a grid on a worst-case integrand and reuse it for a
/// family of easier ones.
pub fn adaptive_partition<T: Integrand>(
    f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    tol: f64,
    initial_panels: usize,
) -> Result<Vec<(f64, f64)>> {
    let mut panels = Vec::new();
    adaptive(f, a, b, tol, initial_panels, Some(&mut panels))?;
    Ok(panels)
}

fn adaptive<T: Integrand>(
    mut f: impl FnMut(f64) -> T,
    a: f64,
    b: f64,
    tol: f64,
    initial_panels: usize,
    mut record: Option<&mut Vec<(f64, f64)>>,
) -> Result<(T, f64)> {
    if !(a.is_finite() && b.is_finite()) || a > b {
        return Err(Error::Domain(format!("invalid interval [{a}, {b}]")));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be positive, got {tol}")));
    }
    if a == b {
        return Ok((T::zero(), 0.0));
    }
    let width = b - a;
    let n0 = initial_panels.max(1);
    let mut stack: Vec<(f64, f64)> = (0..n0)
        .rev()
        .map(|i| (a + width * i as f64 / n0 as f64, a + width * (i + 1) as f64 / n0 as f64))
        .collect();
    let mut acc = T::zero();
    let mut error_sum = 0.0;
    let mut scale = 0.0_f64;
    let mut panels = 0;
    while let Some((lo, hi)) = stack.pop() {
        panels += 1;
        if panels > MAX_PANELS {
            return Err(Error::Quadrature(format!(
                "adaptive quadrature on [{a}, {b}] exceeded {MAX_PANELS} panels"
            )));
        }
        let (coarse, fine, mass) = panel_pair(&mut f, lo, hi);
        if !fine.magnitude().is_finite() {
            return Err(Error::Quadrature(format!("non-finite integrand on [{lo}, {hi}]")));
        }
        let error = (fine + coarse * -1.0).magnitude();
        let share = (hi - lo) / width;
        let budget = tol * (share * (1.0 + scale) + mass);
        if error <= budget || hi - lo < 1e-13 * width.max(1.0) {
            acc += fine;
            error_sum += error;
            scale = scale.max(acc.magnitude());
            if let Some(list) = record.as_deref_mut() {
                list.push((lo, hi));
            }
        } else {
            let mid = 0.5 * (lo + hi);
            stack.push((mid, hi));
            stack.push((lo, mid));
        }
    }
    Ok((acc, error_sum))
}

/// Tracks the contribution of successive panels to a running integral.
#[derive(Debug, Clone)]
pub struct TailMonitor {
    tol: f64,
    quiet_needed: usize,
    quiet: usize,
    mass: f64,
}

impl TailMonitor {
    pub fn new(tol: f64, quiet_needed: usize) -> Self {
        Self { tol, quiet_needed, quiet: 0, mass: 0.0 }
    }

    /// Record one panel's absolute mass; returns true once the tail is negligible.
    pub fn push(&mut self, panel_mass: f64) -> bool {
        self.mass += panel_mass;
        if panel_mass <= self.tol * self.mass {
            self.quiet += 1;
        } else {
            self.quiet = 0;
        }
        self.quiet >= self.quiet_needed
    }

    pub fn accumulated(&self) -> f64 {
        self.mass
    }
}

/// Value of a truncated half-line integral and where the summation stopped.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HalflineIntegral<T> {
    pub value: T,
    pub stopped_at: f64,
}

/// `∫_0^∞ f` by consecutive panels of width `panel`, stopping after
/// [`QUIET_PANELS`] panels in a row contribute less than `tol` of the total.
pub fn integrate_halfline<T: Integrand>(
    mut f: impl FnMut(f64) -> T,
    tol: f64,
    panel: f64,
) -> Result<HalflineIntegral<T>> {
    if !(panel > 0.0 && panel.is_finite()) {
        return Err(Error::Domain(format!("panel width must be positive, got {panel}")));
    }
    let mut monitor = TailMonitor::new(tol, QUIET_PANELS);
    let mut acc = T::zero();
    for i in 0..MAX_TAIL_PANELS {
        let lo = panel * i as f64;
        let (_, fine, mass) = panel_pair(&mut f, lo, lo + panel);
        acc += fine;
        if monitor.push(mass) && i >= 1 {
            return Ok(HalflineIntegral { value: acc, stopped_at: lo + panel });
        }
    }
    Err(Error::Tail(format!(
        "half-line integral not settled after {MAX_TAIL_PANELS} panels of width {panel}"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rule_orders_and_errors() {
        assert!(matches!(gauss_legendre(1, 0.0, 1.0), Err(Error::Range(_))));
        assert!(matches!(gauss_legendre(257, 0.0, 1.0), Err(Error::Range(_))));
        assert!(matches!(gauss_legendre(4, 1.0, 0.0), Err(Error::Domain(_))));
        for k in [2, 3, 7, 16, 32, 64, 256] {
            let rule = gauss_legendre(k, -1.0, 1.0).unwrap();
            let total: f64 = rule.weights.iter().sum();
            assert!((total - 2.0).abs() < 1e-13, "k={k} total={total}");
            assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn two_point_rule() {
        let rule = gauss_legendre(2, -1.0, 1.0).unwrap();
        let x = 1.0 / 3f64.sqrt();
        assert!((rule.nodes[0] + x).abs() < 1e-15 && (rule.nodes[1] - x).abs() < 1e-15);
        assert!((rule.weights[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn polynomial_exactness() {
        for k in [5, 16, 32, 100] {
            let rule = gauss_legendre(k, 0.0, 2.0).unwrap();
            let degree = 2 * k - 1;
            let got = rule.apply(|x| x.powi(degree as i32));
            let exact = 2f64.powi(degree as i32 + 1) / (degree as f64 + 1.0);
            assert!((got - exact).abs() < 1e-12 * exact, "k={k}");
        }
    }

    #[test]
    fn adaptive_handles_oscillation() {
        let got = integrate_adaptive(|x: f64| (50.0 * x).cos(), 0.0, 3.0, 1e-13, 1).unwrap();
        let exact = (150.0f64).sin() / 50.0;
        assert!((got - exact).abs() < 1e-13);
        let z = integrate_adaptive(|x: f64| Complex64::new(0.0, x).exp(), 0.0, PI, 1e-13, 1).unwrap();
        assert!((z - Complex64::new(0.0, 2.0)).norm() < 1e-13);
    }

    #[test]
    fn halfline_exponential() {
        let got = integrate_halfline(|x: f64| (-x).exp(), 1e-15, 1.0).unwrap();
        assert!((got.value - 1.0).abs() < 1e-13);
        assert!(got.stopped_at > 30.0 && got.stopped_at < 45.0);
        assert!(matches!(integrate_halfline(|_x: f64| 1.0, 1e-12, 1.0), Err(Error::Tail(_))));
    }
}
