use std::f64::consts::PI;

use super::forward::forward_spectrum_product;
use super::inverse::inverse_many;
use super::{RadialFunction, TransformOptions, MIN_SAMPLE_INTERVALS};
use crate::error::{Error, Result};
use crate::geometry::{sphere_area, volume_density, ManifoldParams};
use crate::quadrature::integrate_adaptive;

/// Tolerance of the nested quadrature in [`convolve_direct_hyperbolic`].
const DIRECT_TOL: f64 = 1e-10;

/// `f * f₁` through the convolution rule, tabulated on a uniform grid over
/// `[0, R_f + R_f₁]` and splined.
pub fn convolve_spectral(
    p: &ManifoldParams,
    f: &RadialFunction,
    f1: &RadialFunction,
    opts: &TransformOptions,
) -> Result<RadialFunction> {
    let support = f.support_radius() + f1.support_radius();
    let mut local = opts.clone();
    local.r_max = Some(support);
    // one layout for the factors and the inversion of their product
    local.panel_width = Some(opts.spectral_panel(support, support));
    let (a, b) = forward_spectrum_product(p, f, f1, &local)?;
    let product = a.product(&b);
    let step = support / MIN_SAMPLE_INTERVALS as f64;
    let radii: Vec<f64> = (0..=MIN_SAMPLE_INTERVALS).map(|k| k as f64 * step).collect();
    let values = inverse_many(p, &product, &radii, &local)?;
    Ok(RadialFunction::sampled(values, step)?.with_note("spectral convolution"))
}

/// `(f * f₁)(x) = ∫ f(d(o, y)) f₁(d(x, y)) dv(y)` at `d(o, x) = r`, by
/// direct integration in geodesic polar coordinates. Only the two real
/// hyperbolic models have the closed-form law of cosines this needs.
pub fn convolve_direct_hyperbolic(p: &ManifoldParams, f: &RadialFunction, f1: &RadialFunction, r: f64) -> Result<f64> {
    let model = p.hyperbolic_model().ok_or_else(|| {
        Error::Model(format!(
            "direct convolution needs a real hyperbolic model, got n = {}, Q = {}",
            p.n(),
            p.q()
        ))
    })?;
    if !(r >= 0.0 && r.is_finite()) {
        return Err(Error::Domain(format!("radius must be non-negative, got {r}")));
    }
    let s = model.curvature_scale();
    let power = p.n() as i32 - 2;
    let sphere = sphere_area(p.n() - 1);
    let reach = f1.support_radius();
    let outer_lo = (r - reach).max(0.0);
    let outer_hi = f.support_radius().min(r + reach);
    if outer_lo >= outer_hi {
        return Ok(0.0);
    }
    let mut failure = None;
    let value = integrate_adaptive(
        |t| {
            let weight = f.eval(t) * volume_density(p, t);
            if weight == 0.0 {
                return 0.0;
            }
            let sr = (s * r).sinh();
            let st = (s * t).sinh();
            let gap = (0.5 * s * (r - t)).sinh();
            let inner = integrate_adaptive(
                |theta: f64| {
                    let half = (0.5 * theta).sin();
                    // cosh(s d) - 1, written to avoid cancellation near d = 0
                    let excess = 2.0 * gap * gap + 2.0 * sr * st * half * half;
                    let d = (excess + (excess * (excess + 2.0)).sqrt()).ln_1p() / s;
                    f1.eval(d) * theta.sin().powi(power)
                },
                0.0,
                PI,
                DIRECT_TOL,
                4,
            );
            match inner {
                Ok(v) => weight * v,
                Err(e) => {
                    failure.get_or_insert(e);
                    0.0
                }
            }
        },
        outer_lo,
        outer_hi,
        DIRECT_TOL,
        4,
    )?;
    if let Some(e) = failure {
        return Err(e);
    }
    Ok(sphere * value)
}
