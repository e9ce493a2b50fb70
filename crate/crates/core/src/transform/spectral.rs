use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::quadrature::{rule_16, rule_32};

/// Nodes per spectral panel: a 16-point and a 32-point Gauss-Legendre set.
pub const NODES_PER_PANEL: usize = 48;

/// How a spectral function came to be.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Origin {
    Analytic,
    SampledFromForward,
}

type Callable = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// An even function of the spectral parameter, given on `λ >= 0`.
#[derive(Clone)]
pub struct SpectralFunction {
    repr: Repr,
    origin: Origin,
}

#[derive(Clone)]
enum Repr {
    Callable(Callable),
    Sampled(Arc<Samples>),
}

/// Values on consecutive panels `[k w, (k+1) w]`, 48 per panel.
#[derive(Debug, Clone)]
pub(crate) struct Samples {
    pub(crate) width: f64,
    pub(crate) values: Vec<Complex64>,
    /// Support radius of the radial function behind the samples, if known.
    pub(crate) support: Option<f64>,
}

impl Samples {
    pub(crate) fn panels(&self) -> usize {
        self.values.len() / NODES_PER_PANEL
    }

    fn panel(&self, k: usize) -> &[Complex64] {
        &self.values[k * NODES_PER_PANEL..(k + 1) * NODES_PER_PANEL]
    }
}

impl fmt::Debug for SpectralFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = f.debug_struct("SpectralFunction");
        s.field("origin", &self.origin);
        if let Some((step, lambda_max)) = self.grid() {
            s.field("panel_width", &step).field("lambda_max", &lambda_max);
        }
        s.finish()
    }
}

impl SpectralFunction {
    pub fn new(f: impl Fn(f64) -> Complex64 + Send + Sync + 'static) -> Self {
        Self { repr: Repr::Callable(Arc::new(f)), origin: Origin::Analytic }
    }

    pub fn real(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Self::new(move |lambda| Complex64::new(f(lambda), 0.0))
    }

    pub fn zero() -> Self {
        Self::real(|_| 0.0)
    }

    pub(crate) fn from_samples_with_support(width: f64, values: Vec<Complex64>, support: f64) -> Self {
        Self::sampled_inner(width, values, Some(support))
    }

    fn sampled_inner(width: f64, values: Vec<Complex64>, support: Option<f64>) -> Self {
        debug_assert_eq!(values.len() % NODES_PER_PANEL, 0);
        Self {
            repr: Repr::Sampled(Arc::new(Samples { width, values, support })),
            origin: Origin::SampledFromForward,
        }
    }

    /// Support radius of the underlying radial function, when known.
    pub fn support_hint(&self) -> Option<f64> {
        self.samples().and_then(|s| s.support)
    }

    pub fn origin(&self) -> Origin {
        self.origin
    }

    /// `(panel width, λ_max)` for sampled functions.
    pub fn grid(&self) -> Option<(f64, f64)> {
        match &self.repr {
            Repr::Sampled(s) => Some((s.width, s.width * s.panels() as f64)),
            Repr::Callable(_) => None,
        }
    }

    pub(crate) fn samples(&self) -> Option<&Samples> {
        match &self.repr {
            Repr::Sampled(s) => Some(s),
            Repr::Callable(_) => None,
        }
    }

    /// Value at `λ`, extended evenly. Sampled functions vanish beyond `λ_max`
    /// and are interpolated on the 32-point set in between.
    pub fn eval(&self, lambda: f64) -> Complex64 {
        let lambda = lambda.abs();
        match &self.repr {
            Repr::Callable(f) => f(lambda),
            Repr::Sampled(s) => interpolate(s, lambda),
        }
    }

    /// Pointwise product; sampled layouts are kept when both factors share one.
    pub fn product(&self, other: &SpectralFunction) -> SpectralFunction {
        if let (Some(a), Some(b)) = (self.samples(), other.samples()) {
            if a.width == b.width {
                let panels = a.panels().min(b.panels());
                let values = (0..panels * NODES_PER_PANEL).map(|i| a.values[i] * b.values[i]).collect();
                let support = a.support.zip(b.support).map(|(x, y)| x + y);
                return SpectralFunction::sampled_inner(a.width, values, support);
            }
        }
        let (f, g) = (self.clone(), other.clone());
        SpectralFunction::new(move |lambda| f.eval(lambda) * g.eval(lambda))
    }

    pub fn scaled(&self, factor: Complex64) -> SpectralFunction {
        if let Some(s) = self.samples() {
            let values = s.values.iter().map(|v| v * factor).collect();
            return SpectralFunction::sampled_inner(s.width, values, s.support);
        }
        let f = self.clone();
        SpectralFunction::new(move |lambda| f.eval(lambda) * factor)
    }

    /// Values at the 16- and 32-point nodes of `[lo, lo + width]`.
    pub(crate) fn panel_values(&self, lo: f64, width: f64, out: &mut [Complex64; NODES_PER_PANEL]) {
        if let Some(s) = self.samples() {
            if s.width == width {
                let k = (lo / width).round();
                if (k * width - lo).abs() <= 1e-12 * width.max(lo) {
                    let k = k as usize;
                    if k < s.panels() {
                        out.copy_from_slice(s.panel(k));
                    } else {
                        out.fill(Complex64::new(0.0, 0.0));
                    }
                    return;
                }
            }
        }
        for (slot, lambda) in out.iter_mut().zip(PanelNodes::new(lo, width).positions()) {
            *slot = self.eval(lambda);
        }
    }
}

/// Node positions and weights of one spectral panel.
#[derive(Debug, Clone)]
pub(crate) struct PanelNodes {
    pub(crate) lo: f64,
    pub(crate) width: f64,
}

impl PanelNodes {
    pub(crate) fn new(lo: f64, width: f64) -> Self {
        Self { lo, width }
    }

    /// 48 positions: the 16-point set then the 32-point set.
    pub(crate) fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        let half = 0.5 * self.width;
        let mid = self.lo + half;
        rule_16().nodes.iter().chain(rule_32().nodes.iter()).map(move |x| mid + half * x)
    }

    /// Weights aligned with [`PanelNodes::positions`].
    pub(crate) fn weights(&self) -> impl Iterator<Item = f64> + '_ {
        let half = 0.5 * self.width;
        rule_16().weights.iter().chain(rule_32().weights.iter()).map(move |w| w * half)
    }
}

fn barycentric_weights() -> &'static [f64] {
    use std::sync::OnceLock;
    static WEIGHTS: OnceLock<Vec<f64>> = OnceLock::new();
    WEIGHTS.get_or_init(|| {
        let rule = rule_32();
        rule.nodes
            .iter()
            .zip(&rule.weights)
            .enumerate()
            .map(|(j, (x, w))| {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * ((1.0 - x * x) * w).sqrt()
            })
            .collect()
    })
}

fn interpolate(s: &Samples, lambda: f64) -> Complex64 {
    let panels = s.panels();
    let k = (lambda / s.width).floor() as usize;
    if k >= panels {
        if k == panels && lambda <= s.width * panels as f64 {
            return interpolate_in_panel(s, panels - 1, lambda);
        }
        return Complex64::new(0.0, 0.0);
    }
    interpolate_in_panel(s, k, lambda)
}

fn interpolate_in_panel(s: &Samples, k: usize, lambda: f64) -> Complex64 {
    let values = &s.panel(k)[16..];
    let x = 2.0 * (lambda - k as f64 * s.width) / s.width - 1.0;
    let nodes = &rule_32().nodes;
    let weights = barycentric_weights();
    let mut numerator = Complex64::new(0.0, 0.0);
    let mut denominator = 0.0;
    for j in 0..nodes.len() {
        let diff = x - nodes[j];
        if diff == 0.0 {
            return values[j];
        }
        let t = weights[j] / diff;
        numerator += values[j] * t;
        denominator += t;
    }
    numerator / denominator
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampled_interpolation_is_spectral() {
        let width = 1.5;
        let panels = 8;
        let f = |x: f64| Complex64::new((3.0 * x).cos() * (-0.1 * x).exp(), x.sin());
        let mut values = Vec::new();
        for k in 0..panels {
            values.extend(PanelNodes::new(k as f64 * width, width).positions().map(f));
        }
        let h = SpectralFunction::from_samples_with_support(width, values, 1.0);
        assert_eq!(h.grid(), Some((width, 12.0)));
        for lambda in [0.0, 0.3, 4.4, 11.9, 12.0] {
            assert!((h.eval(lambda) - f(lambda)).norm() < 1e-13, "{lambda}");
            assert_eq!(h.eval(-lambda), h.eval(lambda));
        }
        assert_eq!(h.eval(12.5), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn weights_integrate_panel() {
        let nodes = PanelNodes::new(2.0, 3.0);
        let total: f64 = nodes.weights().sum();
        assert!((total - 6.0).abs() < 1e-13);
    }
}
