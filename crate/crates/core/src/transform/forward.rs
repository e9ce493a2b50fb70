use num_complex::Complex64;
use rayon::prelude::*;

use super::spectral::{PanelNodes, NODES_PER_PANEL};
use super::{RadialFunction, SpectralFunction, SpectralTail, TransformOptions};
use crate::error::{Error, Result};
use crate::geometry::{volume_density, ManifoldParams};
use crate::quadrature::{adaptive_partition, integrate_adaptive, rule_32};
use crate::spherical::{plancherel_density, SphericalFunction};

/// Radians of `e^{iλr}` a starting radial panel has to resolve.
const PANEL_RADIANS: f64 = 12.0;

fn initial_panels(phase: f64) -> usize {
    (phase / PANEL_RADIANS).ceil() as usize + 4
}

/// `f̂(λ) = ω_{n-1} ∫ f(r) φ_λ(r) Θ(r) dr` by adaptive quadrature on `[0, R]`.
pub fn forward(p: &ManifoldParams, f: &RadialFunction, lambda: f64, opts: &TransformOptions) -> Result<Complex64> {
    if !lambda.is_finite() {
        return Err(Error::Domain(format!("non-finite spectral parameter {lambda}")));
    }
    let support = f.support_radius();
    let table = SphericalFunction::new(p, Complex64::new(lambda, 0.0), support)?;
    let panels = initial_panels(lambda.abs() * support);
    let integral = integrate_adaptive(
        |r| {
            let weight = f.eval(r) * volume_density(p, r);
            if weight == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            table.eval(r).map(|phi| phi * weight).unwrap_or(Complex64::new(f64::NAN, 0.0))
        },
        0.0,
        support,
        opts.forward_tol,
        panels,
    )?;
    Ok(integral * p.sphere_area())
}

/// `ω_{n-1} ∫ f conj(f₁) Θ dr`.
pub fn plancherel_spatial(
    p: &ManifoldParams,
    f: &RadialFunction,
    f1: &RadialFunction,
    opts: &TransformOptions,
) -> Result<Complex64> {
    let support = f.support_radius().max(f1.support_radius());
    let value = integrate_adaptive(
        |r| f.eval(r) * f1.eval(r) * volume_density(p, r),
        0.0,
        support,
        opts.forward_tol,
        8,
    )?;
    Ok(Complex64::new(value * p.sphere_area(), 0.0))
}

/// Forward transform sampled on spectral panels until the Plancherel-weighted
/// tail is negligible.
pub fn forward_spectrum(p: &ManifoldParams, f: &RadialFunction, opts: &TransformOptions) -> Result<SpectralFunction> {
    Ok(sample_spectra(p, &[f], opts, TailWeight::Plancherel)?.pop().expect("one spectrum"))
}

/// Transforms of `f` and `g` on a common layout, truncated where the tail of
/// `f̂ · ĝ` is negligible. Suited to Plancherel pairings and convolutions.
pub fn forward_spectrum_product(
    p: &ManifoldParams,
    f: &RadialFunction,
    g: &RadialFunction,
    opts: &TransformOptions,
) -> Result<(SpectralFunction, SpectralFunction)> {
    let mut spectra = sample_spectra(p, &[f, g], opts, TailWeight::Plancherel)?;
    let second = spectra.pop().expect("two spectra");
    let first = spectra.pop().expect("two spectra");
    Ok((first, second))
}

/// Frozen radial quadrature for one function: nodes and
/// `ω_{n-1} w f(r) Θ(r)` masses, fine enough for `λ <= frequency`.
struct RadialGrid {
    nodes: Vec<f64>,
    masses: Vec<f64>,
}

impl RadialGrid {
    fn build(p: &ManifoldParams, f: &RadialFunction, frequency: f64, tol: f64) -> Result<Self> {
        let support = f.support_radius();
        let panels = adaptive_partition(
            |r| Complex64::new(0.0, frequency * r).exp() * (f.eval(r) * volume_density(p, r)),
            0.0,
            support,
            tol,
            initial_panels(frequency * support),
        )?;
        let rule = rule_32();
        let omega = p.sphere_area();
        let mut nodes = Vec::with_capacity(panels.len() * rule.len());
        let mut masses = Vec::with_capacity(panels.len() * rule.len());
        for (lo, hi) in panels {
            let half = 0.5 * (hi - lo);
            let mid = 0.5 * (hi + lo);
            for (x, w) in rule.nodes.iter().zip(&rule.weights) {
                let r = mid + half * x;
                let mass = omega * w * half * f.eval(r) * volume_density(p, r);
                if mass != 0.0 {
                    nodes.push(r);
                    masses.push(mass);
                }
            }
        }
        Ok(Self { nodes, masses })
    }

    fn apply(&self, table: &SphericalFunction) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (&r, &m) in self.nodes.iter().zip(&self.masses) {
            acc += table.eval(r)? * m;
        }
        Ok(acc)
    }
}

const INITIAL_FREQUENCY: f64 = 32.0;

pub(crate) fn inverse_weight(p: &ManifoldParams, lambda: f64) -> Result<f64> {
    Ok(2.0 * plancherel_density(p, lambda)?)
}

/// Weight applied to `|h|` by the tail test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TailWeight {
    Plancherel,
    Unit,
}

impl TailWeight {
    pub(crate) fn at(self, p: &ManifoldParams, lambda: f64) -> Result<f64> {
        match self {
            TailWeight::Plancherel => inverse_weight(p, lambda),
            TailWeight::Unit => Ok(1.0),
        }
    }
}

pub(crate) fn sample_spectra(
    p: &ManifoldParams,
    fs: &[&RadialFunction],
    opts: &TransformOptions,
    tail_weight: TailWeight,
) -> Result<Vec<SpectralFunction>> {
    let support = fs.iter().map(|f| f.support_radius()).fold(0.0, f64::max);
    let width = opts.spectral_panel(support, opts.r_max_for(support));
    if !(width > 0.0 && width.is_finite()) {
        return Err(Error::Domain(format!("invalid spectral panel width {width}")));
    }
    let batch = 2 * rayon::current_num_threads().max(1);
    let mut frequency = INITIAL_FREQUENCY;
    let mut grids = build_grids(p, fs, frequency, opts)?;
    let mut values: Vec<Vec<Complex64>> = vec![Vec::new(); fs.len()];
    let mut tail = SpectralTail::new(opts);
    let mut panel = 0usize;
    loop {
        let batch_end = (panel + batch) as f64 * width;
        if panel as f64 * width >= opts.lambda_cap {
            return Err(Error::Tail(format!(
                "forward spectrum still significant at lambda = {}",
                opts.lambda_cap
            )));
        }
        if batch_end > frequency {
            while batch_end > frequency {
                frequency *= 2.0;
            }
            grids = build_grids(p, fs, frequency, opts)?;
        }
        let lambdas: Vec<f64> = (panel..panel + batch)
            .flat_map(|k| PanelNodes::new(k as f64 * width, width).positions().collect::<Vec<_>>())
            .collect();
        let evaluated: Vec<(Vec<Complex64>, f64)> = lambdas
            .par_iter()
            .map(|&lambda| {
                let table = SphericalFunction::new(p, Complex64::new(lambda, 0.0), support)?;
                let transforms = grids.iter().map(|g| g.apply(&table)).collect::<Result<Vec<_>>>()?;
                Ok((transforms, tail_weight.at(p, lambda)?))
            })
            .collect::<Result<_>>()?;
        for (offset, chunk) in evaluated.chunks(NODES_PER_PANEL).enumerate() {
            let nodes = PanelNodes::new((panel + offset) as f64 * width, width);
            let mut envelope = 0.0_f64;
            let mut mass = 0.0;
            for ((transforms, weight), w) in chunk.iter().zip(nodes.weights()).skip(16) {
                let size = transforms.iter().map(|v| v.norm()).product::<f64>() * weight;
                envelope = envelope.max(size);
                mass += size * w;
            }
            for (i, column) in values.iter_mut().enumerate() {
                column.extend(chunk.iter().map(|(t, _)| t[i]));
            }
            if tail.push((panel + offset + 1) as f64 * width, envelope, mass) {
                return Ok(values
                    .into_iter()
                    .map(|v| SpectralFunction::from_samples_with_support(width, v, support))
                    .collect());
            }
        }
        panel += batch;
    }
}

fn build_grids(
    p: &ManifoldParams,
    fs: &[&RadialFunction],
    frequency: f64,
    opts: &TransformOptions,
) -> Result<Vec<RadialGrid>> {
    fs.iter().map(|f| RadialGrid::build(p, f, frequency, opts.forward_tol)).collect()
}
