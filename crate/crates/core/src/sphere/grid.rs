//! Product quadrature on S^{n-1}: Gauss–Gegenbauer in each polar coordinate,
//! uniform azimuth on the innermost circle.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{gauss_jacobi, sphere_measure};

/// Hard cap on the number of grid points.
pub const MAX_POINTS: usize = 10_000_000;

/// Reproducibility stamp for reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridDescriptor {
    pub n: usize,
    pub m: usize,
    pub exactness: usize,
    pub points: usize,
}

impl GridDescriptor {
    /// Short tag for file names, e.g. `n3-m32`.
    pub fn tag(&self) -> String {
        format!("n{}-m{}", self.n, self.m)
    }
}

/// Quadrature nodes and weights on the unit sphere S^{n-1} ⊂ R^n.
///
/// The grid is antipodally symmetric: `antipode(i)` is the index of −θ_i and
/// carries the same weight.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    n: usize,
    m: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
    antipode: Vec<usize>,
    half: Vec<usize>,
}

struct Level {
    dim: usize,
    points: Vec<f64>,
    weights: Vec<f64>,
    antipode: Vec<usize>,
}

fn circle(m: usize) -> Level {
    let count = 2 * m;
    let mut points = Vec::with_capacity(2 * count);
    for j in 0..count {
        let psi = PI * j as f64 / m as f64;
        let (s, c) = psi.sin_cos();
        points.push(c);
        points.push(s);
    }
    // exact zeros keep antipodes bitwise opposite
    for i in 0..count {
        let (a, b) = (i, (i + m) % count);
        if a < b {
            for d in 0..2 {
                let v = 0.5 * (points[2 * a + d] - points[2 * b + d]);
                points[2 * a + d] = v;
                points[2 * b + d] = -v;
            }
        }
    }
    Level {
        dim: 2,
        points,
        weights: vec![PI / m as f64; count],
        antipode: (0..count).map(|j| (j + m) % count).collect(),
    }
}

fn lift(sub: &Level, m: usize) -> Result<Level> {
    let dim = sub.dim + 1;
    let beta = (dim as f64 - 3.0) / 2.0;
    let rule = gauss_jacobi(m, beta, beta)?;
    let mut t = rule.nodes.clone();
    let mut w = rule.weights.clone();
    for i in 0..m / 2 {
        let j = m - 1 - i;
        let ti = 0.5 * (t[j] - t[i]);
        let wi = 0.5 * (w[i] + w[j]);
        t[i] = -ti;
        t[j] = ti;
        w[i] = wi;
        w[j] = wi;
    }
    if m % 2 == 1 {
        t[m / 2] = 0.0;
    }
    let count = sub.weights.len();
    let mut points = Vec::with_capacity(m * count * dim);
    let mut weights = Vec::with_capacity(m * count);
    let mut antipode = Vec::with_capacity(m * count);
    for i in 0..m {
        let r = (1.0 - t[i] * t[i]).sqrt();
        for s in 0..count {
            for d in 0..sub.dim {
                points.push(r * sub.points[s * sub.dim + d]);
            }
            points.push(t[i]);
            weights.push(w[i] * sub.weights[s]);
            antipode.push((m - 1 - i) * count + sub.antipode[s]);
        }
    }
    Ok(Level {
        dim,
        points,
        weights,
        antipode,
    })
}

/// Flat points and weights of the product rule on S^{dim-1} for any dim ≥ 2,
/// exact to degree 2m − 1. For dim = 2 this is the 2m-point circle rule.
pub fn sphere_nodes(dim: usize, m: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if dim < 2 || m < 1 {
        return Err(Error::InvalidArgument(format!(
            "sphere nodes need dim >= 2 and m >= 1, got ({dim}, {m})"
        )));
    }
    let mut level = circle(m);
    while level.dim < dim {
        level = lift(&level, m)?;
    }
    Ok((level.points, level.weights))
}

impl SphereGrid {
    /// Product grid with `m` polar nodes per level and `2m` azimuths,
    /// exact for polynomials of degree ≤ 2m − 1.
    pub fn build(n: usize, m: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "sphere grids need n >= 3, got {n}"
            )));
        }
        if m < 4 {
            return Err(Error::InvalidArgument(format!(
                "grid resolution must be >= 4, got {m}"
            )));
        }
        let count = 2.0 * (m as f64).powi(n as i32 - 1);
        if count > MAX_POINTS as f64 {
            return Err(Error::GridTooLarge {
                points: count,
                limit: MAX_POINTS,
            });
        }
        let mut level = circle(m);
        while level.dim < n {
            level = lift(&level, m)?;
        }
        let half = (0..level.weights.len())
            .filter(|&i| i < level.antipode[i])
            .collect();
        Ok(Self {
            n,
            m,
            points: level.points,
            weights: level.weights,
            antipode: level.antipode,
            half,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn resolution(&self) -> usize {
        self.m
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Polynomial degree integrated exactly.
    pub fn exactness(&self) -> usize {
        2 * self.m - 1
    }

    /// Largest degree L with 2L ≤ exactness, so projections onto degrees ≤ L are exact
    /// for band-limited inputs of the same band.
    pub fn max_band(&self) -> usize {
        self.m - 1
    }

    #[inline]
    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i * self.n..(i + 1) * self.n]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.points.chunks_exact(self.n)
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    #[inline]
    pub fn antipode(&self, i: usize) -> usize {
        self.antipode[i]
    }

    /// One representative of each antipodal pair.
    pub fn half(&self) -> &[usize] {
        &self.half
    }

    /// σ_{n-1}.
    pub fn measure(&self) -> f64 {
        sphere_measure(self.n)
    }

    pub fn descriptor(&self) -> GridDescriptor {
        GridDescriptor {
            n: self.n,
            m: self.m,
            exactness: self.exactness(),
            points: self.len(),
        }
    }
}
