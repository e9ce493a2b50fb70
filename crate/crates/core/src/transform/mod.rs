//! Spherical Fourier transform, its inverse, Plancherel pairings,
//! convolution and the Abel transform.
//!
//! Spectral integrals run over consecutive panels of Gauss-Legendre nodes
//! (a 16-point and a 32-point set per panel, compared for an error estimate)
//! and stop once the integrand envelope over the last `tail_window` units
//! of `λ` falls below `tail_tol` times the accumulated absolute integral.

mod convolution;
mod forward;
mod inverse;
mod paley_wiener;
mod radial;
mod spectral;

pub use convolution::{convolve_direct_hyperbolic, convolve_spectral};
pub use forward::{forward, forward_spectrum, forward_spectrum_product, plancherel_spatial};
pub use inverse::{abel_from_spectrum, abel_transform, abel_transform_many, inverse, inverse_many, plancherel_spectral};
pub use paley_wiener::{paley_wiener_check, PaleyWienerReport};
pub use radial::{RadialFunction, MIN_SAMPLE_INTERVALS};
pub use spectral::{Origin, SpectralFunction, NODES_PER_PANEL};

use std::collections::VecDeque;

/// Tuning knobs shared by the transform routines.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformOptions {
    /// Tolerance of the adaptive radial quadrature.
    pub forward_tol: f64,
    /// Relative size of the spectral integrand envelope at which to stop.
    pub tail_tol: f64,
    /// Length of the trailing `λ` window watched by the tail test.
    pub tail_window: f64,
    /// Hard limit on the spectral integration range.
    pub lambda_cap: f64,
    /// Spectral panel width; derived from supports and radii when unset.
    pub panel_width: Option<f64>,
    /// Largest radius the spectrum will be inverted at; `R + 3` when unset.
    pub r_max: Option<f64>,
    /// Allowed 16/32-node disagreement in spectral integrals, relative to
    /// the accumulated absolute integral.
    pub quadrature_tol: f64,
}

impl Default for TransformOptions {
    fn default() -> Self {
        Self {
            forward_tol: 1e-13,
            tail_tol: 1e-8,
            tail_window: 10.0,
            lambda_cap: 2000.0,
            panel_width: None,
            r_max: None,
            quadrature_tol: 1e-7,
        }
    }
}

/// Oscillation budget per spectral panel, in radians.
const PANEL_PHASE: f64 = 16.0;
const MAX_PANEL_WIDTH: f64 = 4.0;

impl TransformOptions {
    /// Panel width resolving `e^{iλ(R + r)}` for `r <= r_max`.
    pub fn spectral_panel(&self, support: f64, r_max: f64) -> f64 {
        self.panel_width
            .unwrap_or_else(|| (PANEL_PHASE / (support + r_max).max(1e-9)).min(MAX_PANEL_WIDTH))
    }

    pub fn r_max_for(&self, support: f64) -> f64 {
        self.r_max.unwrap_or(support + 3.0)
    }
}

/// Trailing-window tail test for spectral integrals.
#[derive(Debug, Clone)]
pub(crate) struct SpectralTail {
    tol: f64,
    window: f64,
    history: VecDeque<(f64, f64)>,
    mass: f64,
}

impl SpectralTail {
    pub(crate) fn new(opts: &TransformOptions) -> Self {
        Self { tol: opts.tail_tol, window: opts.tail_window, history: VecDeque::new(), mass: 0.0 }
    }

    /// Record a panel ending at `hi`; true once the tail is negligible.
    pub(crate) fn push(&mut self, hi: f64, envelope: f64, mass: f64) -> bool {
        self.mass += mass;
        self.history.push_back((hi, envelope));
        while let Some(&(end, _)) = self.history.front() {
            if end <= hi - self.window {
                self.history.pop_front();
            } else {
                break;
            }
        }
        let worst = self.history.iter().map(|&(_, e)| e).fold(0.0, f64::max);
        hi >= self.window && worst <= self.tol * self.mass
    }

    /// The stopping test with a relative slack on the threshold.
    pub(crate) fn satisfied_within(&self, slack: f64) -> bool {
        let worst = self.history.iter().map(|&(_, e)| e).fold(0.0, f64::max);
        let hi = self.history.back().map_or(0.0, |&(end, _)| end);
        hi >= self.window && worst <= self.tol * self.mass * (1.0 + slack)
    }

    pub(crate) fn mass(&self) -> f64 {
        self.mass
    }
}
