use std::sync::Arc;

use serde::Serialize;

use super::function::SphereFunction;
use super::grid::SphereGrid;
use super::kernel::{apply_kernel, harmonic_dim, multiplier_kernel, project_all};
use crate::error::{Error, Result};
use crate::numerics::{dot, gegenbauer_normalized, norm, sphere_measure};

/// P_k f via the degree-k zonal kernel (dim_k/σ) G_k(x·θ).
///
/// Exact when the grid integrates degree deg(f) + k; beyond the grid's band the
/// result aliases and a warning is logged.
pub fn project(f: &SphereFunction, k: usize) -> SphereFunction {
    let g = f.grid();
    if k > g.max_band() {
        log::warn!(
            "projection onto degree {k} exceeds the band {} of grid {}; result is aliased",
            g.max_band(),
            g.descriptor().tag()
        );
    }
    let mut mult = vec![0.0; k + 1];
    mult[k] = 1.0;
    apply_kernel(f, &multiplier_kernel(g.n(), &mult))
}

/// Per-degree components of a sampled function up to degree L.
#[derive(Debug, Clone)]
pub struct HarmonicSpectrum {
    components: Vec<SphereFunction>,
    energies: Vec<f64>,
    residual: f64,
    total: f64,
}

/// Serializable summary of a spectrum.
#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSummary {
    pub energies: Vec<f64>,
    pub residual: f64,
    pub total: f64,
}

impl HarmonicSpectrum {
    pub fn max_degree(&self) -> usize {
        self.components.len() - 1
    }

    pub fn component(&self, k: usize) -> &SphereFunction {
        &self.components[k]
    }

    pub fn components(&self) -> &[SphereFunction] {
        &self.components
    }

    /// ‖P_k f‖₂ per degree.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn energy(&self, k: usize) -> f64 {
        self.energies.get(k).copied().unwrap_or(0.0)
    }

    /// ‖f − Σ_k P_k f‖₂.
    pub fn residual(&self) -> f64 {
        self.residual
    }

    /// ‖f‖₂.
    pub fn total(&self) -> f64 {
        self.total
    }

    /// Σ_k P_k f.
    pub fn reconstruct(&self) -> SphereFunction {
        let mut acc = self.components[0].clone();
        for c in &self.components[1..] {
            acc = acc.add(c).expect("components share a grid");
        }
        acc
    }

    pub fn summary(&self) -> SpectrumSummary {
        SpectrumSummary {
            energies: self.energies.clone(),
            residual: self.residual,
            total: self.total,
        }
    }
}

/// Splits f into P_0 f, ..., P_L f. Requires L ≤ the grid's band.
pub fn decompose(f: &SphereFunction, max_degree: usize) -> Result<HarmonicSpectrum> {
    let band = f.grid().max_band();
    if max_degree > band {
        return Err(Error::BandLimit {
            requested: max_degree,
            supported: band,
        });
    }
    let components = project_all(f, max_degree);
    let energies = components.iter().map(SphereFunction::l2_norm).collect();
    let mut rest = f.clone();
    for c in &components {
        rest = rest.sub(c)?;
    }
    Ok(HarmonicSpectrum {
        components,
        energies,
        residual: rest.l2_norm(),
        total: f.l2_norm(),
    })
}

/// A zonal harmonic G_k(axis·θ) with its L² norm.
#[derive(Debug, Clone)]
pub struct ZonalHarmonic {
    pub degree: usize,
    pub axis: Vec<f64>,
    pub function: SphereFunction,
    /// Quadrature value of ‖G_k(axis·)‖₂.
    pub l2_norm: f64,
}

impl ZonalHarmonic {
    /// Closed-form ‖G_k(axis·)‖₂ = (σ_{n-1}/dim H_k^n)^{1/2}.
    pub fn exact_norm(n: usize, k: usize) -> f64 {
        (sphere_measure(n) / harmonic_dim(n, k) as f64).sqrt()
    }
}

/// Samples the normalized zonal harmonic of degree k about `axis`.
pub fn zonal_harmonic(grid: &Arc<SphereGrid>, k: usize, axis: &[f64]) -> Result<ZonalHarmonic> {
    let n = grid.n();
    if axis.len() != n {
        return Err(Error::InvalidArgument(format!(
            "axis has {} components, expected {n}",
            axis.len()
        )));
    }
    let r = norm(axis);
    if (r - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "axis must be a unit vector, |axis| = {r}"
        )));
    }
    let lambda = (n as f64 - 2.0) / 2.0;
    let function = SphereFunction::from_fn(grid.clone(), |x| {
        gegenbauer_normalized(k, lambda, dot(axis, x).clamp(-1.0, 1.0))
    });
    let l2_norm = function.l2_norm();
    Ok(ZonalHarmonic {
        degree: k,
        axis: axis.to_vec(),
        function,
        l2_norm,
    })
}

/// Unit vector along coordinate `i`.
pub fn unit_axis(n: usize, i: usize) -> Vec<f64> {
    let mut e = vec![0.0; n];
    e[i] = 1.0;
    e
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid(n: usize, m: usize) -> Arc<SphereGrid> {
        Arc::new(SphereGrid::build(n, m).unwrap())
    }

    #[test]
    fn dims() {
        for k in 0..10 {
            assert_eq!(harmonic_dim(3, k), 2 * k + 1);
        }
        assert_eq!(harmonic_dim(4, 2), 9);
        assert_eq!(harmonic_dim(6, 0), 1);
        assert_eq!(harmonic_dim(5, 1), 5);
    }

    #[test]
    fn projection_reproduces_harmonic() {
        let g = grid(3, 12);
        let y = zonal_harmonic(&g, 2, &[0.6, 0.0, 0.8]).unwrap();
        let p = project(&y.function, 2);
        let err = p.sub(&y.function).unwrap().l2_norm();
        assert!(err <= 1e-8 * y.l2_norm);
        assert!(project(&y.function, 4).l2_norm() <= 1e-8 * y.l2_norm);
    }

    #[test]
    fn z_squared_splits_into_degrees_zero_and_two() {
        let g = grid(3, 12);
        let f = SphereFunction::from_fn(g.clone(), |x| x[2] * x[2]);
        let p0 = project(&f, 0);
        let p2 = project(&f, 2);
        for (i, x) in g.points().enumerate() {
            assert!((p0.values()[i] - 1.0 / 3.0).abs() < 1e-12);
            assert!((p2.values()[i] - (x[2] * x[2] - 1.0 / 3.0)).abs() < 1e-12);
        }
    }

    #[test]
    fn zonal_norm_legendre() {
        let g = grid(3, 12);
        let y = zonal_harmonic(&g, 2, &unit_axis(3, 2)).unwrap();
        assert!((y.l2_norm.powi(2) - 4.0 * PI / 5.0).abs() < 1e-12);
        for n in 3..=5 {
            let g = grid(n, 8);
            for k in 0..=6 {
                let y = zonal_harmonic(&g, k, &unit_axis(n, 0)).unwrap();
                assert!((y.l2_norm - ZonalHarmonic::exact_norm(n, k)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn zonal_degree_one_is_coordinate() {
        let g = grid(4, 6);
        let y = zonal_harmonic(&g, 1, &unit_axis(4, 0)).unwrap();
        for (i, x) in g.points().enumerate() {
            assert!((y.function.values()[i] - x[0]).abs() < 1e-15);
        }
    }

    #[test]
    fn decompose_sparse_input() {
        let g = grid(3, 16);
        let y = zonal_harmonic(&g, 4, &unit_axis(3, 2)).unwrap();
        let f = y.function.map(|v| 1.0 + 0.1 * v);
        let s = decompose(&f, 10).unwrap();
        for k in 0..=10 {
            if k != 0 && k != 4 {
                assert!(s.energy(k) <= 1e-8, "k = {k}: {}", s.energy(k));
            }
        }
        assert!(s.residual() < 1e-10);
        assert!((s.energy(4) - 0.1 * y.l2_norm).abs() < 1e-10);
    }

    #[test]
    fn decompose_rejects_band_beyond_grid() {
        let g = grid(3, 8);
        let f = SphereFunction::constant(g, 1.0);
        assert!(matches!(decompose(&f, 8), Err(Error::BandLimit { .. })));
    }

    #[test]
    fn four_dimensional_projection() {
        let g = grid(4, 8);
        let y = zonal_harmonic(&g, 3, &[0.5, 0.5, 0.5, 0.5]).unwrap();
        let err = project(&y.function, 3).sub(&y.function).unwrap().l2_norm();
        assert!(err <= 1e-10 * y.l2_norm);
        assert!(project(&y.function, 1).l2_norm() <= 1e-10);
    }
}
