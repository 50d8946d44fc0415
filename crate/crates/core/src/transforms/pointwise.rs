//! Transforms evaluated from their integral definitions at single directions.
//!
//! These work on functions given as closures (or as band-limited interpolants of
//! grid samples) and serve as oracles independent of the multiplier route.

use crate::error::{Error, Result};
use crate::numerics::{norm, pairwise_sum};
use crate::sphere::grid::sphere_nodes;
use crate::sphere::orthonormal_complement;

use super::funk_hecke::half_interval_rule;

/// Quadrature of ∫|φ·θ|^p f(θ) dσ(θ) in coordinates adapted to φ.
///
/// θ = tφ + (1−t²)^{1/2} y with y on the unit sphere of φ⊥; the t-integral is
/// split at 0 so the kink of |t|^p lies on a rule endpoint.
#[derive(Debug, Clone)]
pub struct AdaptedRule {
    n: usize,
    p: f64,
    t_nodes: Vec<f64>,
    t_weights: Vec<f64>,
    sub_points: Vec<f64>,
    sub_weights: Vec<f64>,
}

impl AdaptedRule {
    /// `polar_nodes` nodes per half interval; the subsphere rule is exact to degree 2·`sub_m` − 1.
    pub fn new(n: usize, p: f64, polar_nodes: usize, sub_m: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "dimension must be >= 3, got {n}"
            )));
        }
        let beta = (n as f64 - 3.0) / 2.0;
        let rule = half_interval_rule(polar_nodes, p, beta)?;
        let (sub_points, sub_weights) = sphere_nodes(n - 1, sub_m)?;
        let mut t_nodes = Vec::with_capacity(2 * polar_nodes);
        let mut t_weights = Vec::with_capacity(2 * polar_nodes);
        for (&t, &w) in rule.nodes.iter().zip(&rule.weights) {
            let w = w * (1.0 + t).powf(beta);
            t_nodes.push(t);
            t_weights.push(w);
            t_nodes.push(-t);
            t_weights.push(w);
        }
        Ok(Self {
            n,
            p,
            t_nodes,
            t_weights,
            sub_points,
            sub_weights,
        })
    }

    pub fn p(&self) -> f64 {
        self.p
    }

    /// ∫|φ·θ|^p f(θ) dσ(θ).
    pub fn apply(&self, f: impl Fn(&[f64]) -> f64, phi: &[f64]) -> Result<f64> {
        let n = self.n;
        let frame = frame_for(phi, n)?;
        let d = n - 1;
        let mut theta = vec![0.0; n];
        let mut outer = Vec::with_capacity(self.t_nodes.len());
        let mut inner = Vec::with_capacity(self.sub_weights.len());
        for (&t, &wt) in self.t_nodes.iter().zip(&self.t_weights) {
            let s = (1.0 - t * t).max(0.0).sqrt();
            inner.clear();
            for (y, &wy) in self.sub_points.chunks_exact(d).zip(&self.sub_weights) {
                for i in 0..n {
                    let mut v = t * phi[i];
                    for (a, b) in frame.iter().enumerate() {
                        v += s * y[a] * b[i];
                    }
                    theta[i] = v;
                }
                inner.push(wy * f(&theta));
            }
            outer.push(wt * pairwise_sum(&inner));
        }
        Ok(pairwise_sum(&outer))
    }
}

fn frame_for(phi: &[f64], n: usize) -> Result<Vec<Vec<f64>>> {
    if phi.len() != n {
        return Err(Error::InvalidArgument(format!(
            "direction has {} components, expected {n}",
            phi.len()
        )));
    }
    if (norm(phi) - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(
            "direction must be a unit vector".into(),
        ));
    }
    Ok(orthonormal_complement(phi))
}

/// Quadrature over the great subsphere S^{n-1} ∩ φ⊥: a reference rule on S^{n-2}
/// rotated into φ⊥ by a deterministic orthonormal frame.
#[derive(Debug, Clone)]
pub struct SubsphereRule {
    n: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
}

impl SubsphereRule {
    /// The reference rule is exact to degree 2m − 1.
    pub fn new(n: usize, m: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "dimension must be >= 3, got {n}"
            )));
        }
        let (points, weights) = sphere_nodes(n - 1, m)?;
        Ok(Self { n, points, weights })
    }

    /// The rotated nodes in R^n together with their weights.
    pub fn nodes(&self, phi: &[f64]) -> Result<(Vec<Vec<f64>>, &[f64])> {
        let frame = frame_for(phi, self.n)?;
        let d = self.n - 1;
        let pts = self
            .points
            .chunks_exact(d)
            .map(|y| {
                (0..self.n)
                    .map(|i| (0..d).map(|a| y[a] * frame[a][i]).sum())
                    .collect()
            })
            .collect();
        Ok((pts, &self.weights))
    }

    /// ∫_{S^{n-1} ∩ φ⊥} f dσ_{n-2}.
    pub fn apply(&self, f: impl Fn(&[f64]) -> f64, phi: &[f64]) -> Result<f64> {
        let (pts, w) = self.nodes(phi)?;
        let terms: Vec<f64> = pts.iter().zip(w).map(|(x, w)| w * f(x)).collect();
        Ok(pairwise_sum(&terms))
    }
}

/// (C^p f)(φ) from the definition, for a closure f that is smooth on the sphere.
pub fn p_cosine_at(
    f: impl Fn(&[f64]) -> f64,
    n: usize,
    p: f64,
    phi: &[f64],
    resolution: usize,
) -> Result<f64> {
    AdaptedRule::new(n, p, resolution, resolution)?.apply(f, phi)
}

/// (C f)(φ) from the definition.
pub fn cosine_at(
    f: impl Fn(&[f64]) -> f64,
    n: usize,
    phi: &[f64],
    resolution: usize,
) -> Result<f64> {
    p_cosine_at(f, n, 1.0, phi, resolution)
}

/// (R f)(φ) from the definition.
pub fn radon_at(
    f: impl Fn(&[f64]) -> f64,
    n: usize,
    phi: &[f64],
    resolution: usize,
) -> Result<f64> {
    SubsphereRule::new(n, resolution)?.apply(f, phi)
}
