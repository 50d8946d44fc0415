//! Multipliers of zonal integral operators from one-dimensional quadrature.
//!
//! An operator ∫ k(φ·θ) f(θ) dσ(θ) acts on H_k^n by
//! σ_{n-2} ∫_{-1}^{1} k(t) G_k(t) (1−t²)^{(n−3)/2} dt.

use crate::error::{Error, Result};
use crate::numerics::{gauss_jacobi, gegenbauer_normalized, sphere_measure, GaussRule};

/// Nodes used for the half-interval rules; the integrands are polynomial times
/// (1+t)^{(n−3)/2}, analytic on [0, 1].
const HALF_RULE_NODES: usize = 64;

/// Gauss rule on [0, 1] for the weight t^p (1−t)^β.
pub fn half_interval_rule(m: usize, p: f64, beta: f64) -> Result<GaussRule> {
    let rule = gauss_jacobi(m, beta, p)?;
    let scale = 2f64.powf(-(beta + p + 1.0));
    Ok(GaussRule {
        nodes: rule.nodes.iter().map(|x| 0.5 * (1.0 + x)).collect(),
        weights: rule.weights.iter().map(|w| w * scale).collect(),
    })
}

/// Raw multiplier of C^p on H_k^n: σ_{n-2} ∫ |t|^p G_k(t) (1−t²)^{(n−3)/2} dt.
pub fn p_cosine_multiplier_quadrature(n: usize, k: usize, p: f64) -> Result<f64> {
    p_cosine_multipliers_quadrature(n, p, k).map(|v| v[k])
}

/// Raw multipliers of C^p for degrees 0..=L by Gauss–Jacobi quadrature on each half interval.
pub fn p_cosine_multipliers_quadrature(n: usize, p: f64, max_degree: usize) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "dimension must be >= 3, got {n}"
        )));
    }
    if !(p >= 0.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "exponent must be finite and >= 0, got {p}"
        )));
    }
    let beta = (n as f64 - 3.0) / 2.0;
    let nodes = HALF_RULE_NODES.max(max_degree / 2 + 8);
    let rule = half_interval_rule(nodes, p, beta)?;
    let lambda = (n as f64 - 2.0) / 2.0;
    let omega = sphere_measure(n - 1);
    Ok((0..=max_degree)
        .map(|k| {
            let upper =
                rule.integrate(|t| gegenbauer_normalized(k, lambda, t) * (1.0 + t).powf(beta));
            let lower =
                rule.integrate(|t| gegenbauer_normalized(k, lambda, -t) * (1.0 + t).powf(beta));
            omega * (upper + lower)
        })
        .collect())
}

/// Raw Radon multipliers σ_{n-2} G_k(0): the kernel is the point mass at t = 0.
pub fn radon_multipliers_quadrature(n: usize, max_degree: usize) -> Result<Vec<f64>> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "dimension must be >= 3, got {n}"
        )));
    }
    let lambda = (n as f64 - 2.0) / 2.0;
    let omega = sphere_measure(n - 1);
    Ok((0..=max_degree)
        .map(|k| omega * gegenbauer_normalized(k, lambda, 0.0))
        .collect())
}
