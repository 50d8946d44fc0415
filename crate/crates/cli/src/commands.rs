use std::sync::Arc;

use serde::Serialize;
use starbody::bodies::StarBody;
use starbody::experiments::{
    compare_istar, iterate_fixed_point, linear_response, linearization_error_sweep,
    theorem3_multiplier, verify, CheckResult, IStarComparison, IterationOptions, IterationTrace,
    LinearResponse, ResidualSweep, ResponseOperator, VerifyConfig,
};
use starbody::sphere::{GridDescriptor, SphereGrid};
use starbody::transforms::{eigenvalue_cosine, eigenvalue_p_cosine, eigenvalue_radon};

use crate::config::{Command, RunConfig};
use crate::error::CliError;
use crate::output::{float, Report, Sink, Table};

pub fn run(config: &RunConfig) -> Result<(), CliError> {
    let sink = Sink::new(config)?;
    match config.command {
        Command::Eigvals => eigvals(config, &sink),
        Command::Verify => cmd_verify(config, &sink),
        Command::Iterate => iterate(config, &sink),
        Command::CompareIstar => cmd_compare_istar(config, &sink),
        Command::Perturb => perturb(config, &sink),
        Command::Sweep => sweep(config, &sink),
    }
}

/// Closed-form eigenvalues for degrees 0..=L.
pub fn eigenvalue_rows(n: usize, p: f64, max_degree: usize) -> Result<Table, CliError> {
    let mut t = Table::new([
        "n",
        "p",
        "k",
        "mu_raw",
        "m_normalized",
        "radon",
        "theorem3_norm",
    ]);
    for k in 0..=max_degree {
        t.push(vec![
            n.to_string(),
            float(p),
            k.to_string(),
            float(eigenvalue_cosine(n, k)?),
            float(eigenvalue_p_cosine(n, k, p)?),
            float(eigenvalue_radon(n, k)?),
            float(theorem3_multiplier(n, p, k)?.abs()),
        ]);
    }
    Ok(t)
}

fn eigvals(config: &RunConfig, sink: &Sink) -> Result<(), CliError> {
    let table = eigenvalue_rows(config.n, config.p, config.l)?;
    sink.table("", &table, true)
}

#[derive(Serialize)]
struct VerifyResult<'a> {
    passed: bool,
    checks: &'a [CheckResult],
}

fn cmd_verify(config: &RunConfig, sink: &Sink) -> Result<(), CliError> {
    let checks = verify(&VerifyConfig {
        n: config.n,
        p: config.p,
        resolution: config.m,
        max_degree: config.l,
        seed: config.seed,
    })?;
    let mut table = Table::new(["name", "passed", "value", "tolerance", "detail"]);
    for c in &checks {
        table.push(vec![
            c.name.clone(),
            c.passed.to_string(),
            float(c.value),
            float(c.tolerance),
            c.detail.clone(),
        ]);
    }
    sink.table("", &table, true)?;
    let failed = checks.iter().find(|c| !c.passed);
    sink.report(
        &Report {
            config,
            result: VerifyResult {
                passed: failed.is_none(),
                checks: &checks,
            },
        },
        false,
    )?;
    match failed {
        Some(c) => Err(CliError::Check(format!(
            "{}: value {:.6e} exceeds tolerance {:.6e} ({})",
            c.name, c.value, c.tolerance, c.detail
        ))),
        None => Ok(()),
    }
}

fn grid(config: &RunConfig) -> Result<Arc<SphereGrid>, CliError> {
    Ok(Arc::new(SphereGrid::build(config.n, config.m)?))
}

fn body(config: &RunConfig, grid: &Arc<SphereGrid>) -> Result<StarBody, CliError> {
    let spec = config
        .body
        .as_ref()
        .ok_or_else(|| CliError::Config(format!("`{}` needs --body", config.command.name())))?;
    Ok(StarBody::from_spec(grid.clone(), spec)?)
}

fn trace_table(trace: &IterationTrace) -> Table {
    let degrees = trace.initial_energies.len();
    let mut header: Vec<String> = [
        "step",
        "sup_deviation",
        "l2_deviation",
        "c_hat",
        "convexity_margin",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    header.extend((0..degrees).map(|k| format!("energy_{k}")));
    let mut t = Table::new(header);
    let energies = |e: &[f64]| -> Vec<String> {
        (0..degrees)
            .map(|k| float(e.get(k).copied().unwrap_or(0.0)))
            .collect()
    };

    let mut row = vec![
        "0".to_string(),
        float(trace.initial.sup_deviation),
        float(trace.initial.l2_deviation),
        String::new(),
        String::new(),
    ];
    row.extend(energies(&trace.initial_energies));
    t.push(row);
    for s in &trace.steps {
        let mut row = vec![
            s.step.to_string(),
            float(s.distance.sup_deviation),
            float(s.distance.l2_deviation),
            float(s.c_hat),
            float(s.convexity_margin),
        ];
        row.extend(energies(&s.energies));
        t.push(row);
    }
    t
}

#[derive(Serialize)]
struct IterateResult<'a> {
    trace: &'a IterationTrace,
}

fn iterate(config: &RunConfig, sink: &Sink) -> Result<(), CliError> {
    let grid = grid(config)?;
    let k0 = body(config, &grid)?;
    let trace = iterate_fixed_point(
        &k0,
        IterationOptions {
            p: config.p,
            steps: config.steps,
            renormalize: config.renormalize,
            isotropic_each_step: config.isotropic_each_step,
            seed: config.seed,
        },
    )?;
    if !trace.converged {
        log::warn!(
            "not converged after {} steps; final sup deviation {:.3e}",
            trace.steps.len(),
            trace.final_distance().sup_deviation
        );
    }
    sink.table("trace", &trace_table(&trace), false)?;
    sink.report(
        &Report {
            config,
            result: IterateResult { trace: &trace },
        },
        true,
    )
}

#[derive(Serialize)]
struct CompareResult<'a> {
    grid: GridDescriptor,
    comparison: &'a IStarComparison,
}

fn cmd_compare_istar(config: &RunConfig, sink: &Sink) -> Result<(), CliError> {
    let grid = grid(config)?;
    let k = body(config, &grid)?;
    let comparison = compare_istar(&k, config.p)?;
    let mut table = Table::new([
        "degree",
        "centroid_side",
        "istar_side",
        "ratio",
        "theorem3_norm",
    ]);
    for d in &comparison.transfer {
        table.push(vec![
            d.degree.to_string(),
            float(d.centroid_side),
            float(d.istar_side),
            float(d.ratio),
            float(d.theorem3_norm),
        ]);
    }
    sink.table("transfer", &table, false)?;
    sink.report(
        &Report {
            config,
            result: CompareResult {
                grid: grid.descriptor(),
                comparison: &comparison,
            },
        },
        true,
    )
}

#[derive(Serialize)]
struct PerturbResult<'a> {
    responses: &'a [LinearResponse],
}

fn operator_name(op: ResponseOperator) -> &'static str {
    match op {
        ResponseOperator::Centroid => "centroid",
        ResponseOperator::PolarIntersectionVsCentroid => "ratio",
    }
}

fn perturb(config: &RunConfig, sink: &Sink) -> Result<(), CliError> {
    let responses = config
        .eps
        .iter()
        .map(|&e| {
            linear_response(
                config.degree,
                e,
                config.n,
                config.p,
                config.response,
                config.m,
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    let mut table = Table::new([
        "degree",
        "epsilon",
        "operator",
        "coefficient",
        "measured",
        "predicted",
        "error",
    ]);
    for r in &responses {
        table.push(vec![
            r.degree.to_string(),
            float(r.epsilon),
            operator_name(r.operator).to_string(),
            float(r.coefficient),
            float(r.measured),
            float(r.predicted),
            float(r.error()),
        ]);
    }
    sink.table("", &table, true)?;
    sink.report(
        &Report {
            config,
            result: PerturbResult {
                responses: &responses,
            },
        },
        false,
    )
}

#[derive(Serialize)]
struct SweepResult<'a> {
    sweep: &'a ResidualSweep,
}

fn sweep(config: &RunConfig, sink: &Sink) -> Result<(), CliError> {
    let s = linearization_error_sweep(
        config.alpha,
        config.beta,
        config.p,
        &config.eps,
        config.n,
        config.degree,
        config.m,
    )?;
    log::info!("log-log slope {:.6}", s.slope);
    let mut table = Table::new(["epsilon", "residual"]);
    for (e, r) in s.epsilons.iter().zip(&s.residuals) {
        table.push(vec![float(*e), float(*r)]);
    }
    sink.table("", &table, true)?;
    sink.report(
        &Report {
            config,
            result: SweepResult { sweep: &s },
        },
        false,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn column(t: &Table, name: &str) -> Vec<f64> {
        let j = t.header.iter().position(|h| h == name).unwrap();
        t.rows.iter().map(|r| r[j].parse().unwrap()).collect()
    }

    #[test]
    fn cosine_eigenvalue_at_degree_four() {
        let t = eigenvalue_rows(3, 1.0, 8).unwrap();
        assert_eq!(t.rows.len(), 9);
        let mu = column(&t, "mu_raw");
        assert!((mu[4] + PI / 12.0).abs() < 1e-15);
        assert_eq!(mu[3], 0.0);
    }

    #[test]
    fn even_p_vanishes_beyond_p() {
        let t = eigenvalue_rows(3, 2.0, 8).unwrap();
        let m = column(&t, "m_normalized");
        assert!(m[2] != 0.0);
        assert!(m[4..].iter().all(|&v| v == 0.0), "{m:?}");
    }

    #[test]
    fn zero_band_is_one_row() {
        let t = eigenvalue_rows(3, 1.0, 0).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0][2], "0");
    }

    #[test]
    fn theorem3_column_is_one_at_degree_two() {
        let t = eigenvalue_rows(4, 1.5, 6).unwrap();
        let tau = column(&t, "theorem3_norm");
        assert!((tau[2] - 1.0).abs() < 1e-12);
        assert!(tau[4] < 1.0 && tau[6] < tau[4]);
    }
}
