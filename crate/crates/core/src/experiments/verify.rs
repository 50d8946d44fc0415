//! A fixed battery of invariant checks, each reduced to a number and a tolerance.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::constants::{c_b, constants};
use super::spectra::{
    eigenvalue_cross_validation, theorem1_operator_spectrum, theorem2_ratio,
    theorem3_operator_spectrum,
};
use crate::bodies::{apply_linear, centroid_body, BodySpec, LinearMap, StarBody};
use crate::error::Result;
use crate::numerics::norm;
use crate::sphere::{unit_axis, zonal_harmonic, BandLimited, SphereGrid, ZonalHarmonic};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub n: usize,
    pub p: f64,
    pub resolution: usize,
    pub max_degree: usize,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n: 3,
            p: 1.5,
            resolution: 12,
            max_degree: 8,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CheckResult {
    fn at_most(name: &str, value: f64, tolerance: f64, detail: impl Into<String>) -> Self {
        Self {
            name: name.to_string(),
            passed: value <= tolerance,
            value,
            tolerance,
            detail: detail.into(),
        }
    }

    fn failed(name: &str, err: impl std::fmt::Display) -> Self {
        Self {
            name: name.to_string(),
            passed: false,
            value: f64::NAN,
            tolerance: f64::NAN,
            detail: err.to_string(),
        }
    }
}

fn run(name: &str, f: impl FnOnce() -> Result<CheckResult>) -> CheckResult {
    f().unwrap_or_else(|e| CheckResult::failed(name, e))
}

/// Runs every check; a failing check does not stop the others.
pub fn verify(config: &VerifyConfig) -> Result<Vec<CheckResult>> {
    let n = config.n;
    let p = config.p;
    let grid = Arc::new(SphereGrid::build(n, config.resolution)?);
    let band = grid.max_band();
    let mut out = Vec::new();

    out.push(run("aliasing", || {
        let k = config.max_degree;
        let y = zonal_harmonic(&grid, k, &unit_axis(n, 0))?;
        let exact = ZonalHarmonic::exact_norm(n, k);
        let err = (y.l2_norm - exact).abs() / exact;
        Ok(CheckResult::at_most(
            "aliasing",
            err,
            1e-10,
            format!(
                "quadrature norm of the degree-{k} zonal harmonic on a grid exact to degree {}",
                grid.exactness()
            ),
        ))
    }));

    out.push(run("constants", || {
        let t = constants(n, p)?;
        Ok(CheckResult::at_most(
            "constants",
            t.max_relative_error(),
            1e-8,
            format!(
                "C_B={:.12} C_B,p={:.12} C'_B={:.12}",
                t.c_b, t.c_b_p, t.c_b_prime
            ),
        ))
    }));

    out.push(run("eigenvalues", || {
        let l = config.max_degree.min(band);
        let rows = eigenvalue_cross_validation(n, config.resolution, l, &[1.0, p])?;
        let worst = rows
            .iter()
            .max_by(|a, b| a.relative_error.total_cmp(&b.relative_error))
            .expect("at least one row");
        Ok(CheckResult::at_most(
            "eigenvalues",
            worst.relative_error,
            1e-7,
            format!("worst: {} degree {}", worst.transform, worst.degree),
        ))
    }));

    out.push(run("theorem1_contraction", || {
        let (_, report) = theorem1_operator_spectrum(n, 12)?;
        let err = (report.max_abs - 1.0 / (n as f64 + 3.0)).abs();
        let ok = report.is_strong_contraction();
        Ok(CheckResult::at_most(
            "theorem1_contraction",
            if ok { err } else { f64::INFINITY },
            1e-12,
            format!("max |multiplier| {:.15}", report.max_abs),
        ))
    }));

    out.push(run("theorem2_ratio", || {
        let r = theorem2_ratio(n, p)?;
        let expected = (2.0 - p).abs() / (n as f64 + 2.0 + p);
        Ok(CheckResult::at_most(
            "theorem2_ratio",
            (r - expected).abs(),
            1e-10,
            format!("{r:.15}"),
        ))
    }));

    out.push(run("theorem3_degree_two", || {
        let s = theorem3_operator_spectrum(n, p, 12)?;
        let err = (s.degree_two() - 1.0).abs().max(s.route_discrepancy());
        let ok = s.decreasing_below_one;
        Ok(CheckResult::at_most(
            "theorem3_degree_two",
            if ok { err } else { f64::INFINITY },
            1e-10,
            "degree-2 norm, product and quadrature routes, tail monotonicity",
        ))
    }));

    out.push(run("ball_fixed_point", || {
        let ball = StarBody::ball(grid.clone(), 1.0)?;
        let h = centroid_body(&ball, 1.0)?;
        let err = h.map(|v| c_b(n) * v - 1.0).sup_norm();
        Ok(CheckResult::at_most(
            "ball_fixed_point",
            err,
            1e-8,
            "sup |C_B h_ΓB − 1|",
        ))
    }));

    out.push(run("positivity", || {
        let axis: Vec<f64> = (1..=n).map(|i| i as f64 / (n as f64)).collect();
        let r = norm(&axis);
        let axis: Vec<f64> = axis.iter().map(|v| v / r).collect();
        let body = StarBody::from_spec(grid.clone(), &BodySpec::zonal(4.min(band), axis, 0.1))?;
        let h = centroid_body(&body, p)?;
        Ok(CheckResult::at_most(
            "positivity",
            -h.min(),
            0.0,
            "negated minimum of h_{Γ_pK}",
        ))
    }));

    out.push(run("commutation", || {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let t = random_map(&mut rng, n, 1.5)?;
        let body = StarBody::from_spec(
            grid.clone(),
            &BodySpec::zonal(2.min(band), unit_axis(n, n - 1), 0.05),
        )?;
        let h = centroid_body(&body, p)?;
        let h_t = centroid_body(&apply_linear(&body, &t)?, p)?;
        let interp = BandLimited::full_band(&h);
        // h_{Γ_p TK}(φ) = h_{Γ_pK}(Tᵀφ)
        let mut worst: f64 = 0.0;
        for (x, &v) in grid.points().zip(h_t.values()) {
            let mut u = t.apply_transpose(x);
            let len = norm(&u);
            u.iter_mut().for_each(|c| *c /= len);
            worst = worst.max((len * interp.value(&u) - v).abs());
        }
        Ok(CheckResult::at_most(
            "commutation",
            worst / h.mean(),
            1e-4,
            format!("random map with condition {:.3}", t.condition()),
        ))
    }));
    Ok(out)
}

/// Near-identity random map with condition number at most `max_condition`.
pub fn random_map(rng: &mut ChaCha8Rng, n: usize, max_condition: f64) -> Result<LinearMap> {
    loop {
        let m: Vec<f64> = (0..n * n)
            .map(|i| {
                let d = if i % (n + 1) == 0 { 1.0 } else { 0.0 };
                d + rng.gen_range(-0.2..0.2)
            })
            .collect();
        match LinearMap::new(n, m) {
            Ok(t) if t.condition() <= max_condition => return Ok(t),
            _ => continue,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_configuration_passes() {
        let results = verify(&VerifyConfig::default()).unwrap();
        for r in &results {
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn under_resolved_grid_fails_aliasing() {
        let cfg = VerifyConfig {
            resolution: 4,
            max_degree: 8,
            ..VerifyConfig::default()
        };
        let results = verify(&cfg).unwrap();
        let first = results.iter().find(|r| !r.passed).unwrap();
        assert_eq!(first.name, "aliasing");
    }
}
