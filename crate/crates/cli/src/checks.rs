use std::f64::consts::PI;

use hspec_core::geometry::{curvature_invariants, ledger_coefficient, mean_curvature, validate_entropy, volume_density};
use hspec_core::specfun::log_gamma;
use hspec_core::spherical::{
    c_function, jacobi_c_function, ode_residual, phi, phi_connection, phi_series, plancherel_density, poisson_average,
};
use hspec_core::transform::{
    convolve_direct_hyperbolic, convolve_spectral, forward_spectrum, inverse_many, paley_wiener_check,
    plancherel_spatial, plancherel_spectral,
};
use hspec_core::{ComplexValue, JacobiOrder, ManifoldParams, RadialFunction};

use crate::commands::params;
use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::Table;

/// Slack of the decay fit behind the Paley-Wiener rows.
const PALEY_WIENER_SLACK: f64 = 1e-2;

struct Outcome {
    name: &'static str,
    error: f64,
    tolerance: f64,
}

impl Outcome {
    fn passed(&self) -> bool {
        self.error <= self.tolerance
    }
}

fn c(re: f64, im: f64) -> ComplexValue {
    ComplexValue::new(re, im)
}

fn worst(values: impl IntoIterator<Item = f64>) -> f64 {
    // NaN must count as a failure, so it wins over everything
    values.into_iter().fold(0.0, |acc, v| if v.is_nan() || acc.is_nan() { f64::NAN } else { acc.max(v) })
}

/// Run every invariant at the configured tolerances; any failure is a
/// validation failure.
pub fn check(config: &RunConfig) -> Result<Table, CliError> {
    let p = params(config)?;
    let mut outcomes = geometry_checks(config, &p)?;
    outcomes.extend(spherical_checks(config, &p)?);
    outcomes.extend(transform_checks(config, &p)?);
    if p.hyperbolic_model().is_some() {
        outcomes.extend(hyperbolic_checks(config, &p)?);
    }

    let mut table = Table::new(["check", "passed", "error", "tolerance"]);
    for o in &outcomes {
        table.push(vec![o.name.into(), o.passed().into(), o.error.into(), o.tolerance.into()]);
    }
    table.emit(config)?;
    let failed: Vec<&str> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.name).collect();
    if failed.is_empty() {
        Ok(table)
    } else {
        Err(CliError::Validation(format!("{} of {} checks failed: {}", failed.len(), outcomes.len(), failed.join("; "))))
    }
}

fn geometry_checks(config: &RunConfig, p: &ManifoldParams) -> Result<Vec<Outcome>, CliError> {
    let identity = config.tol("identity");
    let m = f64::from(p.n()) - 1.0;
    let inv = curvature_invariants(p);
    let report = validate_entropy(p);
    let mut out = vec![
        Outcome {
            name: "entropy bounds (n-1)/2 <= Q <= n-1",
            error: worst(report.checks.iter().map(|b| -b.margin)),
            tolerance: identity,
        },
        Outcome { name: "Ric = (n-1) delta_g", error: (inv.ric - m * inv.delta_g).abs() / m, tolerance: identity },
        Outcome {
            name: "Tr R_v^2 = -((n-1) + 5 Ric)/4 = H",
            error: ((inv.tr_r2 + 0.25 * (m + 5.0 * inv.ric)).abs() + (inv.tr_r2 - inv.h_const).abs()) / m,
            tolerance: identity,
        },
        Outcome {
            name: "first Ledger coefficient = -K/3",
            error: (ledger_coefficient(p, 1)? + inv.k_const / 3.0).abs() / m,
            tolerance: identity,
        },
        Outcome {
            name: "Q recovered from Ric",
            error: (inv.entropy_from_ricci(p.n()) - p.q()).abs() / m,
            tolerance: identity,
        },
    ];

    let mut series_error = 0.0_f64;
    for r in [0.05, 0.2, 0.4] {
        let mut series = m / r;
        let mut factorial = 1.0;
        for k in 1..=15u32 {
            factorial *= f64::from(k);
            series += ledger_coefficient(p, k)? * r.powi(k as i32) / factorial;
        }
        series_error = series_error.max((series - mean_curvature(p, r)?).abs());
    }
    out.push(Outcome { name: "Ledger series reproduces sigma near 0", error: series_error, tolerance: identity });

    let mut log_derivative = 0.0_f64;
    for r in [0.5, 2.0, 6.0] {
        let h = 1e-5;
        let fd = (volume_density(p, r + h).ln() - volume_density(p, r - h).ln()) / (2.0 * h);
        let sigma = mean_curvature(p, r)?;
        log_derivative = log_derivative.max((fd - sigma).abs() / sigma);
    }
    out.push(Outcome { name: "sigma = (log density)'", error: log_derivative, tolerance: config.tol("numeric") });
    Ok(out)
}

fn spherical_checks(config: &RunConfig, p: &ManifoldParams) -> Result<Vec<Outcome>, CliError> {
    let special = config.tol("special");
    let half_q = p.q() / 2.0;
    let mut out = Vec::new();

    let mut constant = 0.0_f64;
    for r in [0.5, 3.0, 9.0] {
        constant = constant.max((phi(p, c(0.0, half_q), r)? - 1.0).norm());
        constant = constant.max((phi(p, c(0.0, -half_q), r)? - 1.0).norm());
    }
    out.push(Outcome { name: "phi at lambda = +-iQ/2 is 1", error: constant, tolerance: special });

    let mut residual = 0.0_f64;
    for lambda in [0.5, 2.0, 6.0] {
        for r in [0.5, 3.0, 8.0] {
            residual = residual.max(ode_residual(p, c(lambda, 0.0), r)?);
        }
    }
    out.push(Outcome { name: "radial Laplace eigen-equation", error: residual, tolerance: config.tol("numeric") });

    let mut connection = 0.0_f64;
    for lambda in [0.4, 1.7, 6.0] {
        let series = phi_series(p, c(lambda, 0.0), 10.0)?;
        let joined = phi_connection(p, c(lambda, 0.0), 10.0)?;
        connection = connection.max((series - joined).norm() / series.norm());
    }
    out.push(Outcome { name: "series = connection formula at r = 10", error: connection, tolerance: special });

    let order = JacobiOrder::from_params(p);
    let scale = log_gamma(c(f64::from(p.n()) / 2.0, 0.0))?.exp() / (2.0 * PI.sqrt());
    let (mut normalization, mut conjugation) = (0.0_f64, 0.0_f64);
    for lambda in [0.3, 1.0, 4.0, 9.5] {
        let direct = c_function(p, c(lambda, 0.0))?;
        let via_jacobi = scale * jacobi_c_function(&order, c(2.0 * lambda, 0.0))?;
        normalization = normalization.max((direct - via_jacobi).norm() / direct.norm());
        let mirrored = c_function(p, c(-lambda, 0.0))?;
        conjugation = conjugation.max((mirrored - direct.conj()).norm() / direct.norm());
    }
    out.push(Outcome { name: "c-function = rescaled Jacobi c-function", error: normalization, tolerance: special });
    out.push(Outcome { name: "c(-lambda) = conj c(lambda)", error: conjugation, tolerance: special });

    let mut excess = 0.0_f64;
    for i in 0..8 {
        for j in 0..8 {
            let lambda = c(10.0 * i as f64 / 7.0, half_q * (2.0 * j as f64 / 7.0 - 1.0));
            for r in [0.4, 2.5, 7.0] {
                excess = excess.max(phi(p, lambda, r)?.norm() - 1.0);
            }
        }
    }
    out.push(Outcome { name: "|phi| <= 1 on the strip |Im lambda| <= Q/2", error: excess, tolerance: special });

    let mut positive = true;
    for lambda in config.lambdas().into_iter().skip(1) {
        positive &= plancherel_density(p, lambda)? > 0.0;
    }
    out.push(Outcome {
        name: "Plancherel density positive on the lambda grid",
        error: if positive { 0.0 } else { f64::INFINITY },
        tolerance: special,
    });
    Ok(out)
}

fn transform_checks(config: &RunConfig, p: &ManifoldParams) -> Result<Vec<Outcome>, CliError> {
    let tolerance = config.tol("transform");
    let f = config.input.build()?;
    let support = f.support_radius();
    let radii = config.radii();
    let mut opts = config.transform_options();
    opts.r_max = Some(config.r_max.max(support));
    let spectrum = forward_spectrum(p, &f, &opts)?;
    let recovered = inverse_many(p, &spectrum, &radii, &opts)?;
    let size = radii.iter().map(|&r| f.eval(r).abs()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let round_trip = worst(radii.iter().zip(&recovered).map(|(&r, v)| (v - f.eval(r)).abs() / size));

    let spatial = plancherel_spatial(p, &f, &f, &opts)?;
    let spectral = plancherel_spectral(p, &spectrum, &spectrum, &opts)?;
    let pairing = (spatial - spectral).norm() / spatial.norm().max(f64::MIN_POSITIVE);

    let window = config.lambda_max.max(50.0);
    let decay = worst((1..=4).map(|order| {
        let report = paley_wiener_check(&spectrum, support, order, window);
        if report.passed {
            report.worst_violation.max(0.0)
        } else {
            f64::INFINITY
        }
    }));

    Ok(vec![
        Outcome { name: "inversion recovers the input on the r grid", error: round_trip, tolerance },
        Outcome { name: "Plancherel: spatial = spectral pairing", error: pairing, tolerance },
        Outcome { name: "Paley-Wiener decay, orders 1..4", error: decay, tolerance: PALEY_WIENER_SLACK },
    ])
}

/// Cross-checks that need the closed-form real hyperbolic models.
fn hyperbolic_checks(config: &RunConfig, p: &ManifoldParams) -> Result<Vec<Outcome>, CliError> {
    let mut poisson = 0.0_f64;
    for lambda in [0.7, 2.0] {
        for r in [0.5, 1.5, 3.0] {
            let oracle = poisson_average(p, c(lambda, 0.0), r)?;
            let value = phi(p, c(lambda, 0.0), r)?;
            poisson = poisson.max((oracle - value).norm());
        }
    }

    let f = RadialFunction::bump(1.0)?;
    let g = RadialFunction::truncated_gaussian(0.8)?;
    let opts = config.transform_options();
    let spectral = convolve_spectral(p, &f, &g, &opts)?;
    let scale = plancherel_spatial(p, &f, &g, &opts)?.re;
    let mut convolution = 0.0_f64;
    for r in [0.0, 0.3, 1.1, 1.6] {
        let direct = convolve_direct_hyperbolic(p, &f, &g, r)?;
        convolution = convolution.max((spectral.eval(r) - direct).abs() / scale);
    }
    Ok(vec![
        Outcome { name: "phi = Poisson boundary average", error: poisson, tolerance: config.tol("numeric") },
        Outcome {
            name: "spectral convolution = direct convolution",
            error: convolution,
            tolerance: config.tol("transform"),
        },
    ])
}
