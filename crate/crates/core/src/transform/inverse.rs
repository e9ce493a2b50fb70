use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use super::forward::{inverse_weight, sample_spectra, TailWeight};
use super::spectral::{PanelNodes, NODES_PER_PANEL};
use super::{RadialFunction, SpectralFunction, SpectralTail, TransformOptions};
use crate::error::{Error, Result};
use crate::geometry::ManifoldParams;
use crate::spherical::SphericalFunction;

/// Largest tolerated imaginary residue of a result expected to be real,
/// relative to the accumulated absolute integral.
const IMAGINARY_TOLERANCE: f64 = 1e-8;
/// Support assumed for analytic spectral functions when sizing panels.
const DEFAULT_SUPPORT: f64 = 1.0;

/// Panel layout of one spectral integral.
#[derive(Debug, Clone, Copy)]
struct Plan {
    width: f64,
    sub: usize,
    limit: Option<usize>,
}

impl Plan {
    fn new(hs: &[&SpectralFunction], required: f64, opts: &TransformOptions) -> Result<Self> {
        let sampled: Vec<(f64, f64)> = hs.iter().filter_map(|h| h.grid()).collect();
        let width = match sampled.first() {
            Some(&(w, _)) => w,
            None => opts.panel_width.unwrap_or(required),
        };
        if !(width > 0.0 && width.is_finite()) {
            return Err(Error::Domain(format!("invalid spectral panel width {width}")));
        }
        let limit = sampled
            .iter()
            .map(|&(_, lambda_max)| (lambda_max / width + 1e-9).floor() as usize)
            .min();
        let sub = ((width / required) - 1e-9).ceil().max(1.0) as usize;
        Ok(Self { width, sub, limit })
    }

    /// Walk outer panels; `integrate` sees each sub-panel, `stats` returns
    /// `(envelope, mass)` of an outer panel for the tail test. Returns the
    /// accumulated mass.
    fn run(
        &self,
        opts: &TransformOptions,
        mut integrate: impl FnMut(f64, f64) -> Result<()>,
        mut stats: impl FnMut(f64, f64) -> Result<(f64, f64)>,
    ) -> Result<f64> {
        let mut tail = SpectralTail::new(opts);
        let step = self.width / self.sub as f64;
        for k in 0.. {
            let lo = k as f64 * self.width;
            if let Some(limit) = self.limit {
                if k >= limit {
                    return Err(Error::Tail(format!(
                        "sampled spectrum ends at lambda = {lo} before its tail is negligible"
                    )));
                }
            }
            if lo >= opts.lambda_cap {
                return Err(Error::Tail(format!(
                    "spectral integrand still significant at lambda = {}",
                    opts.lambda_cap
                )));
            }
            for s in 0..self.sub {
                integrate(lo + s as f64 * step, step)?;
            }
            let (envelope, mass) = stats(lo, self.width)?;
            if tail.push(lo + self.width, envelope, mass) {
                return Ok(tail.mass());
            }
            // last sampled panel: allow for rounding in recomputed statistics
            if self.limit == Some(k + 1) && tail.satisfied_within(1e-9) {
                return Ok(tail.mass());
            }
        }
        unreachable!("panel loop is unbounded")
    }
}

/// Envelope and mass of `Π|h_i| · weight` over the 32-point nodes of a panel.
fn panel_stats(
    p: &ManifoldParams,
    hs: &[&SpectralFunction],
    weight: TailWeight,
    lo: f64,
    width: f64,
) -> Result<(f64, f64)> {
    let nodes = PanelNodes::new(lo, width);
    let mut sizes = [1.0; NODES_PER_PANEL];
    let mut values = [Complex64::new(0.0, 0.0); NODES_PER_PANEL];
    for h in hs {
        h.panel_values(lo, width, &mut values);
        for (s, v) in sizes.iter_mut().zip(&values) {
            *s *= v.norm();
        }
    }
    let mut envelope = 0.0_f64;
    let mut mass = 0.0;
    for ((size, lambda), w) in sizes.iter().zip(nodes.positions()).zip(nodes.weights()).skip(16) {
        let weighted = size * weight.at(p, lambda)?;
        envelope = envelope.max(weighted);
        mass += weighted * w;
    }
    Ok((envelope, mass))
}

fn check_real(values: &[Complex64], mass: f64, what: &str) -> Result<Vec<f64>> {
    values
        .iter()
        .map(|v| {
            if v.im.abs() > IMAGINARY_TOLERANCE * mass.max(1.0) {
                Err(Error::Domain(format!("{what} has imaginary residue {}", v.im)))
            } else {
                Ok(v.re)
            }
        })
        .collect()
}

fn check_error(errors: &[f64], mass: f64, opts: &TransformOptions, what: &str) -> Result<()> {
    let worst = errors.iter().cloned().fold(0.0, f64::max);
    if worst > opts.quadrature_tol * mass {
        return Err(Error::Quadrature(format!(
            "{what}: 16/32-node disagreement {worst:e} exceeds {:e}",
            opts.quadrature_tol * mass
        )));
    }
    Ok(())
}

/// `f(r) = 2 d_g ∫ h(λ) φ_λ(r) dλ / |c(λ)|²` at one radius.
pub fn inverse(p: &ManifoldParams, h: &SpectralFunction, r: f64, opts: &TransformOptions) -> Result<f64> {
    Ok(inverse_many(p, h, &[r], opts)?[0])
}

/// Inverse transform at several radii, sharing each `φ_λ` across them.
pub fn inverse_many(p: &ManifoldParams, h: &SpectralFunction, radii: &[f64], opts: &TransformOptions) -> Result<Vec<f64>> {
    if radii.is_empty() {
        return Ok(Vec::new());
    }
    if radii.iter().any(|r| !(r.is_finite() && *r >= 0.0)) {
        return Err(Error::Domain("radii must be finite and non-negative".into()));
    }
    let r_max = radii.iter().cloned().fold(0.0, f64::max);
    let support = h.support_hint().unwrap_or(DEFAULT_SUPPORT);
    let plan = Plan::new(&[h], opts.spectral_panel(support, r_max), opts)?;
    let mut acc = vec![Complex64::new(0.0, 0.0); radii.len()];
    let mut errors = vec![0.0; radii.len()];
    let mut values = [Complex64::new(0.0, 0.0); NODES_PER_PANEL];
    let mass = plan.run(
        opts,
        |lo, width| {
            h.panel_values(lo, width, &mut values);
            let nodes = PanelNodes::new(lo, width);
            let lambdas: Vec<f64> = nodes.positions().collect();
            let weights: Vec<f64> = nodes.weights().collect();
            let columns: Vec<Option<Vec<Complex64>>> = (0..NODES_PER_PANEL)
                .into_par_iter()
                .map(|j| {
                    if values[j] == Complex64::new(0.0, 0.0) {
                        return Ok(None);
                    }
                    let lambda = lambdas[j];
                    let table = SphericalFunction::new(p, Complex64::new(lambda, 0.0), r_max)?;
                    let scale = values[j] * (weights[j] * inverse_weight(p, lambda)?);
                    radii
                        .iter()
                        .map(|&r| Ok(table.eval(r)? * scale))
                        .collect::<Result<Vec<_>>>()
                        .map(Some)
                })
                .collect::<Result<_>>()?;
            for i in 0..radii.len() {
                let mut coarse = Complex64::new(0.0, 0.0);
                let mut fine = Complex64::new(0.0, 0.0);
                for (j, column) in columns.iter().enumerate() {
                    if let Some(c) = column {
                        if j < 16 {
                            coarse += c[i];
                        } else {
                            fine += c[i];
                        }
                    }
                }
                acc[i] += fine;
                errors[i] += (fine - coarse).norm();
            }
            Ok(())
        },
        |lo, width| panel_stats(p, &[h], TailWeight::Plancherel, lo, width),
    )?;
    check_error(&errors, mass, opts, "inverse transform")?;
    check_real(&acc, mass, "inverse transform")
}

/// `2 d_g ∫ h conj(h₁) dλ / |c(λ)|²`.
pub fn plancherel_spectral(
    p: &ManifoldParams,
    h: &SpectralFunction,
    h1: &SpectralFunction,
    opts: &TransformOptions,
) -> Result<Complex64> {
    let required = opts.panel_width.unwrap_or(1.0);
    let plan = Plan::new(&[h, h1], required.min(h.grid().or(h1.grid()).map_or(required, |g| g.0)), opts)?;
    let mut acc = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut a = [Complex64::new(0.0, 0.0); NODES_PER_PANEL];
    let mut b = [Complex64::new(0.0, 0.0); NODES_PER_PANEL];
    let mass = plan.run(
        opts,
        |lo, width| {
            h.panel_values(lo, width, &mut a);
            h1.panel_values(lo, width, &mut b);
            let nodes = PanelNodes::new(lo, width);
            let mut coarse = Complex64::new(0.0, 0.0);
            let mut fine = Complex64::new(0.0, 0.0);
            for (j, (lambda, w)) in nodes.positions().zip(nodes.weights()).enumerate() {
                let product = a[j] * b[j].conj();
                if product == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let term = product * (w * inverse_weight(p, lambda)?);
                if j < 16 {
                    coarse += term;
                } else {
                    fine += term;
                }
            }
            acc += fine;
            error += (fine - coarse).norm();
            Ok(())
        },
        |lo, width| panel_stats(p, &[h, h1], TailWeight::Plancherel, lo, width),
    )?;
    check_error(&[error], mass, opts, "spectral Plancherel pairing")?;
    Ok(acc)
}

/// `A(f)(t) = (1/π) ∫_0^∞ h(λ) cos(λ t) dλ` for an even spectrum `h`.
pub fn abel_from_spectrum(h: &SpectralFunction, ts: &[f64], opts: &TransformOptions) -> Result<Vec<f64>> {
    if ts.is_empty() {
        return Ok(Vec::new());
    }
    if ts.iter().any(|t| !t.is_finite()) {
        return Err(Error::Domain("non-finite Abel abscissa".into()));
    }
    let t_max = ts.iter().map(|t| t.abs()).fold(0.0, f64::max);
    let support = h.support_hint().unwrap_or(DEFAULT_SUPPORT);
    let plan = Plan::new(&[h], opts.spectral_panel(support, t_max), opts)?;
    let mut acc = vec![Complex64::new(0.0, 0.0); ts.len()];
    let mut errors = vec![0.0; ts.len()];
    let mut values = [Complex64::new(0.0, 0.0); NODES_PER_PANEL];
    let mass = plan.run(
        opts,
        |lo, width| {
            h.panel_values(lo, width, &mut values);
            let nodes = PanelNodes::new(lo, width);
            let lambdas: Vec<f64> = nodes.positions().collect();
            let weights: Vec<f64> = nodes.weights().collect();
            for (i, &t) in ts.iter().enumerate() {
                let mut coarse = Complex64::new(0.0, 0.0);
                let mut fine = Complex64::new(0.0, 0.0);
                for j in 0..NODES_PER_PANEL {
                    let term = values[j] * (weights[j] * (lambdas[j] * t).cos());
                    if j < 16 {
                        coarse += term;
                    } else {
                        fine += term;
                    }
                }
                acc[i] += fine / PI;
                errors[i] += (fine - coarse).norm() / PI;
            }
            Ok(())
        },
        |lo, width| panel_stats_unit(&[h], lo, width),
    )?;
    check_error(&errors, mass, opts, "Abel transform")?;
    check_real(&acc, mass, "Abel transform")
}

fn panel_stats_unit(hs: &[&SpectralFunction], lo: f64, width: f64) -> Result<(f64, f64)> {
    let nodes = PanelNodes::new(lo, width);
    let mut sizes = [1.0; NODES_PER_PANEL];
    let mut values = [Complex64::new(0.0, 0.0); NODES_PER_PANEL];
    for h in hs {
        h.panel_values(lo, width, &mut values);
        for (s, v) in sizes.iter_mut().zip(&values) {
            *s *= v.norm();
        }
    }
    let mut envelope = 0.0_f64;
    let mut mass = 0.0;
    for (size, w) in sizes.iter().zip(nodes.weights()).skip(16) {
        envelope = envelope.max(*size);
        mass += size * w;
    }
    Ok((envelope, mass))
}

/// Abel transform of `f` at one abscissa.
pub fn abel_transform(p: &ManifoldParams, f: &RadialFunction, t: f64, opts: &TransformOptions) -> Result<f64> {
    Ok(abel_transform_many(p, f, &[t], opts)?[0])
}

/// Abel transform of `f` at several abscissae, realized through the
/// spherical transform and an inverse cosine transform.
pub fn abel_transform_many(p: &ManifoldParams, f: &RadialFunction, ts: &[f64], opts: &TransformOptions) -> Result<Vec<f64>> {
    let t_max = ts.iter().map(|t| t.abs()).fold(0.0, f64::max);
    let support = f.support_radius();
    let mut local = opts.clone();
    local.r_max = Some(opts.r_max_for(support).max(t_max));
    let spectrum = sample_spectra(p, &[f], &local, TailWeight::Unit)?.pop().expect("one spectrum");
    abel_from_spectrum(&spectrum, ts, &local)
}
