use hspec_core::geometry::{mean_curvature, validate_entropy, volume_density};
use hspec_core::spherical::{c_function, phi, plancherel_density};
use hspec_core::transform::{abel_transform_many, forward, forward_spectrum, inverse_many};
use hspec_core::{ComplexValue, ManifoldParams};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{format_number, Cell, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TableKind {
    Density,
    Sigma,
    Phi,
    Cfun,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Direction {
    Forward,
    Inverse,
    Roundtrip,
    Abel,
}

pub fn params(config: &RunConfig) -> Result<ManifoldParams, CliError> {
    Ok(ManifoldParams::new(config.n, config.q)?)
}

/// Entropy bound report; a violated bound is a validation failure.
pub fn validate(config: &RunConfig) -> Result<Table, CliError> {
    let p = ManifoldParams::permissive(config.n, config.q)?;
    let report = validate_entropy(&p);
    let mut table = Table::new(["check", "passed", "value", "note"]);
    for check in &report.checks {
        table.push(vec![check.name.into(), check.passed.into(), check.margin.into(), "".into()]);
    }
    let note = match report.equality {
        Some(model) => format!("equality: {}", model.label()),
        None => String::new(),
    };
    table.push(vec!["|delta_g|".into(), report.passed().into(), report.delta_abs.into(), note.into()]);
    table.emit(config)?;
    if report.passed() {
        Ok(table)
    } else {
        let failed: Vec<&str> = report.checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
        Err(CliError::Validation(format!("n = {}, Q = {}: {}", config.n, config.q, failed.join("; "))))
    }
}

pub fn table(config: &RunConfig, kind: TableKind) -> Result<Table, CliError> {
    let p = params(config)?;
    let table = match kind {
        TableKind::Density => {
            let mut table = Table::new(["r", "density"]);
            for r in config.radii() {
                table.push(vec![r.into(), volume_density(&p, r).into()]);
            }
            table
        }
        TableKind::Sigma => {
            let mut table = Table::new(["r", "sigma"]);
            for r in config.radii() {
                // the spheres degenerate at the origin
                let sigma = if r == 0.0 { f64::INFINITY } else { mean_curvature(&p, r)? };
                table.push(vec![r.into(), sigma.into()]);
            }
            table
        }
        TableKind::Phi => phi_table(config, &p)?,
        TableKind::Cfun => {
            let mut table = Table::new(["lambda", "c_re", "c_im", "c_abs", "plancherel_density"]);
            // c has a pole at the origin, so the row for lambda = 0 is dropped
            let lambdas: Vec<f64> = config.lambdas().into_iter().skip(1).collect();
            let rows: Vec<Result<Vec<Cell>, CliError>> = lambdas
                .par_iter()
                .map(|&lambda| {
                    let c = c_function(&p, ComplexValue::new(lambda, 0.0))?;
                    let density = plancherel_density(&p, lambda)?;
                    Ok(vec![lambda.into(), c.re.into(), c.im.into(), c.norm().into(), density.into()])
                })
                .collect();
            for row in rows {
                table.push(row?);
            }
            table
        }
    };
    table.emit(config)?;
    Ok(table)
}

/// One row per radius, one column per real spectral parameter.
fn phi_table(config: &RunConfig, p: &ManifoldParams) -> Result<Table, CliError> {
    let lambdas = config.lambdas();
    let mut columns = vec!["r".to_string()];
    columns.extend(lambdas.iter().map(|l| format!("lambda={}", format_number(*l))));
    let mut table = Table::new(columns);
    let rows: Vec<Result<Vec<Cell>, CliError>> = config
        .radii()
        .par_iter()
        .map(|&r| {
            let mut row = vec![Cell::Num(r)];
            for &lambda in &lambdas {
                row.push(phi(p, ComplexValue::new(lambda, 0.0), r)?.re.into());
            }
            Ok(row)
        })
        .collect();
    for row in rows {
        table.push(row?);
    }
    Ok(table)
}

pub fn transform(config: &RunConfig, direction: Direction) -> Result<Table, CliError> {
    let p = params(config)?;
    let f = config.input.build()?;
    let opts = config.transform_options();
    let table = match direction {
        Direction::Forward => {
            let mut table = Table::new(["lambda", "re", "im"]);
            let values: Vec<Result<ComplexValue, hspec_core::Error>> =
                config.lambdas().par_iter().map(|&lambda| forward(&p, &f, lambda, &opts)).collect();
            for (lambda, value) in config.lambdas().into_iter().zip(values) {
                let value = value?;
                table.push(vec![lambda.into(), value.re.into(), value.im.into()]);
            }
            table
        }
        Direction::Inverse | Direction::Roundtrip => {
            let radii = config.radii();
            let mut local = opts.clone();
            local.r_max = Some(config.r_max.max(f.support_radius()));
            let spectrum = forward_spectrum(&p, &f, &local)?;
            let recovered = inverse_many(&p, &spectrum, &radii, &local)?;
            if direction == Direction::Inverse {
                let mut table = Table::new(["r", "value"]);
                for (r, v) in radii.into_iter().zip(recovered) {
                    table.push(vec![r.into(), v.into()]);
                }
                table
            } else {
                let mut table = Table::new(["r", "input", "recovered", "error"]);
                let mut worst = 0.0_f64;
                for (r, v) in radii.into_iter().zip(recovered) {
                    let exact = f.eval(r);
                    worst = worst.max((v - exact).abs());
                    table.push(vec![r.into(), exact.into(), v.into(), (v - exact).abs().into()]);
                }
                eprintln!("round trip of {}: max error {worst:e}", config.input);
                table
            }
        }
        Direction::Abel => {
            let ts = config.abel_points();
            let values = abel_transform_many(&p, &f, &ts, &opts)?;
            let mut table = Table::new(["t", "abel"]);
            for (t, v) in ts.into_iter().zip(values) {
                table.push(vec![t.into(), v.into()]);
            }
            table
        }
    };
    table.emit(config)?;
    Ok(table)
}
