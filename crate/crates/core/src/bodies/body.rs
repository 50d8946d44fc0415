use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{dot, gegenbauer_normalized, norm, Lu, SymmetricMatrix};
use crate::sphere::{decompose, HarmonicSpectrum, SphereFunction, SphereGrid};

/// Bodies are flagged origin-symmetric when ρ(θ) and ρ(−θ) agree to this tolerance.
pub const SYMMETRY_TOLERANCE: f64 = 1e-10;

/// Largest condition number accepted for a [`LinearMap`].
pub const MAX_CONDITION: f64 = 1e8;

/// Star body stored by its radial function on a sphere grid.
#[derive(Debug, Clone)]
pub struct StarBody {
    radial: SphereFunction,
    origin_symmetric: bool,
    volume: OnceLock<f64>,
    spectrum: OnceLock<HarmonicSpectrum>,
}

impl StarBody {
    /// Wraps radial samples; every sample must be strictly positive.
    pub fn new(radial: SphereFunction) -> Result<Self> {
        if let Some((index, &value)) = radial
            .values()
            .iter()
            .enumerate()
            .find(|(_, &v)| !(v > 0.0))
        {
            return Err(Error::Nonpositive { value, index });
        }
        let origin_symmetric = radial.antipodal_asymmetry() <= SYMMETRY_TOLERANCE;
        Ok(Self {
            radial,
            origin_symmetric,
            volume: OnceLock::new(),
            spectrum: OnceLock::new(),
        })
    }

    pub fn ball(grid: Arc<SphereGrid>, radius: f64) -> Result<Self> {
        Self::new(SphereFunction::constant(grid, radius))
    }

    pub fn from_spec(grid: Arc<SphereGrid>, spec: &BodySpec) -> Result<Self> {
        spec.validate(grid.n())?;
        let values = SphereFunction::from_fn(grid, |x| spec.radial_at(x));
        Self::new(values)
    }

    pub fn radial(&self) -> &SphereFunction {
        &self.radial
    }

    pub fn grid(&self) -> &Arc<SphereGrid> {
        self.radial.grid()
    }

    pub fn n(&self) -> usize {
        self.grid().n()
    }

    pub fn is_origin_symmetric(&self) -> bool {
        self.origin_symmetric
    }

    /// vol(K) = (1/n) ∫ ρ^n dσ, computed once.
    pub fn volume(&self) -> f64 {
        *self.volume.get_or_init(|| {
            let n = self.n() as f64;
            self.radial.map(|r| r.powf(n)).integrate() / n
        })
    }

    /// Harmonic spectrum of ρ at the grid's band, computed once.
    pub fn spectrum(&self) -> &HarmonicSpectrum {
        self.spectrum.get_or_init(|| {
            decompose(&self.radial, self.grid().max_band()).expect("band equals the grid band")
        })
    }

    /// Mean radius r₀ = P₀ρ.
    pub fn mean_radius(&self) -> f64 {
        self.radial.mean()
    }

    /// rK.
    pub fn scaled(&self, r: f64) -> Result<StarBody> {
        StarBody::new(self.radial.scale(r))
    }
}

/// One zonal term amplitude·G_k(axis·θ) of a harmonic body description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HarmonicTerm {
    pub degree: usize,
    pub axis: Vec<f64>,
    pub amplitude: f64,
}

/// Body description used by configuration files and the command line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum BodySpec {
    Ball {
        radius: f64,
    },
    Ellipsoid {
        axes: Vec<f64>,
    },
    /// ρ = 1 + Σ amplitude·G_k(axis·θ); axes are normalized on use.
    Harmonic {
        coeffs: Vec<HarmonicTerm>,
    },
}

impl BodySpec {
    pub fn validate(&self, n: usize) -> Result<()> {
        match self {
            BodySpec::Ball { radius } => {
                if !(*radius > 0.0 && radius.is_finite()) {
                    return Err(Error::InvalidBody(format!(
                        "ball radius must be positive, got {radius}"
                    )));
                }
            }
            BodySpec::Ellipsoid { axes } => {
                if axes.len() != n {
                    return Err(Error::InvalidBody(format!(
                        "ellipsoid has {} axes in dimension {n}",
                        axes.len()
                    )));
                }
                if axes.iter().any(|a| !(*a > 0.0 && a.is_finite())) {
                    return Err(Error::InvalidBody("ellipsoid axes must be positive".into()));
                }
            }
            BodySpec::Harmonic { coeffs } => {
                for term in coeffs {
                    if term.axis.len() != n {
                        return Err(Error::InvalidBody(format!(
                            "harmonic axis has {} components in dimension {n}",
                            term.axis.len()
                        )));
                    }
                    if !(norm(&term.axis) > 0.0) || !term.amplitude.is_finite() {
                        return Err(Error::InvalidBody(
                            "harmonic term needs a nonzero axis".into(),
                        ));
                    }
                }
            }
        }
        Ok(())
    }

    /// Radial function at a unit vector.
    pub fn radial_at(&self, x: &[f64]) -> f64 {
        match self {
            BodySpec::Ball { radius } => *radius,
            BodySpec::Ellipsoid { axes } => {
                let q: f64 = x.iter().zip(axes).map(|(t, a)| (t / a).powi(2)).sum();
                q.sqrt().recip()
            }
            BodySpec::Harmonic { coeffs } => {
                let lambda = (x.len() as f64 - 2.0) / 2.0;
                1.0 + coeffs
                    .iter()
                    .map(|c| {
                        let t = dot(&c.axis, x) / norm(&c.axis);
                        c.amplitude * gegenbauer_normalized(c.degree, lambda, t.clamp(-1.0, 1.0))
                    })
                    .sum::<f64>()
            }
        }
    }

    /// Single zonal perturbation 1 + ε G_k(axis·θ).
    pub fn zonal(degree: usize, axis: Vec<f64>, amplitude: f64) -> Self {
        BodySpec::Harmonic {
            coeffs: vec![HarmonicTerm {
                degree,
                axis,
                amplitude,
            }],
        }
    }
}

/// Invertible linear map of R^n, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    n: usize,
    matrix: Vec<f64>,
    inverse: Vec<f64>,
    det_abs: f64,
    condition: f64,
}

impl LinearMap {
    pub fn new(n: usize, matrix: Vec<f64>) -> Result<Self> {
        if matrix.len() != n * n {
            return Err(Error::InvalidArgument(format!(
                "matrix has {} entries, expected {}",
                matrix.len(),
                n * n
            )));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "matrix entries must be finite".into(),
            ));
        }
        let gram = SymmetricMatrix::from_fn(n, |i, j| {
            (0..n).map(|k| matrix[k * n + i] * matrix[k * n + j]).sum()
        })?;
        let eig = crate::numerics::spd_eigen(&gram)?;
        let smax = eig.values[0].max(0.0).sqrt();
        let smin = eig.values[n - 1].max(0.0).sqrt();
        let condition = if smin > 0.0 {
            smax / smin
        } else {
            f64::INFINITY
        };
        if !(condition < MAX_CONDITION) {
            return Err(Error::IllConditioned(condition));
        }
        let lu = Lu::new(n, &matrix)?;
        let det_abs = lu.determinant().abs();
        let inverse = lu.inverse();
        Ok(Self {
            n,
            matrix,
            inverse,
            det_abs,
            condition,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self::diagonal(&vec![1.0; n]).expect("identity is well conditioned")
    }

    pub fn diagonal(d: &[f64]) -> Result<Self> {
        let n = d.len();
        let mut m = vec![0.0; n * n];
        for (i, &v) in d.iter().enumerate() {
            m[i * n + i] = v;
        }
        Self::new(n, m)
    }

    pub fn from_symmetric(m: &SymmetricMatrix) -> Result<Self> {
        Self::new(m.dim(), m.to_dense())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &[f64] {
        &self.matrix
    }

    pub fn det_abs(&self) -> f64 {
        self.det_abs
    }

    pub fn condition(&self) -> f64 {
        self.condition
    }

    pub fn apply(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(self.n, &self.matrix, x)
    }

    pub fn apply_inverse(&self, x: &[f64]) -> Vec<f64> {
        mat_vec(self.n, &self.inverse, x)
    }

    /// Tᵀx.
    pub fn apply_transpose(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|j| (0..n).map(|i| self.matrix[i * n + j] * x[i]).sum())
            .collect()
    }

    /// T^{-T}x.
    pub fn apply_inverse_transpose(&self, x: &[f64]) -> Vec<f64> {
        let n = self.n;
        (0..n)
            .map(|j| (0..n).map(|i| self.inverse[i * n + j] * x[i]).sum())
            .collect()
    }

    /// self ∘ other.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap> {
        let n = self.n;
        let mut m = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                m[i * n + j] = (0..n)
                    .map(|k| self.matrix[i * n + k] * other.matrix[k * n + j])
                    .sum();
            }
        }
        LinearMap::new(n, m)
    }

    pub fn scaled(&self, s: f64) -> Result<LinearMap> {
        LinearMap::new(self.n, self.matrix.iter().map(|v| v * s).collect())
    }
}

fn mat_vec(n: usize, m: &[f64], x: &[f64]) -> Vec<f64> {
    (0..n)
        .map(|i| (0..n).map(|j| m[i * n + j] * x[j]).sum())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn grid() -> Arc<SphereGrid> {
        Arc::new(SphereGrid::build(3, 24).unwrap())
    }

    #[test]
    fn ball_volumes() {
        let g = grid();
        let b = StarBody::ball(g.clone(), 1.0).unwrap();
        assert!((b.volume() - 4.0 * PI / 3.0).abs() < 1e-12);
        let b2 = StarBody::ball(g, 2.0).unwrap();
        assert!((b2.volume() - 32.0 * PI / 3.0).abs() < 1e-11);
        assert!(b2.is_origin_symmetric());
    }

    #[test]
    fn ellipsoid_volume() {
        let spec = BodySpec::Ellipsoid {
            axes: vec![1.2, 1.0, 0.8],
        };
        let k = StarBody::from_spec(grid(), &spec).unwrap();
        assert!((k.volume() - 4.0 * PI / 3.0 * 0.96).abs() < 1e-6);
    }

    #[test]
    fn rejects_nonpositive_radius() {
        let g = grid();
        let f = SphereFunction::from_fn(g, |x| x[0]);
        assert!(matches!(StarBody::new(f), Err(Error::Nonpositive { .. })));
    }

    #[test]
    fn spec_json_round_trip() {
        let text = r#"{"type":"harmonic","coeffs":[{"degree":4,"axis":[0,0,1],"amplitude":0.05}]}"#;
        let spec: BodySpec = serde_json::from_str(text).unwrap();
        assert_eq!(spec, BodySpec::zonal(4, vec![0.0, 0.0, 1.0], 0.05));
        let e: BodySpec = serde_json::from_str(r#"{"type":"ellipsoid","axes":[1,2,3]}"#).unwrap();
        assert!(matches!(e, BodySpec::Ellipsoid { .. }));
    }

    #[test]
    fn spec_validation() {
        assert!(BodySpec::Ellipsoid {
            axes: vec![1.0, 1.0]
        }
        .validate(3)
        .is_err());
        assert!(BodySpec::Ball { radius: -1.0 }.validate(3).is_err());
        assert!(BodySpec::zonal(2, vec![0.0; 3], 0.1).validate(3).is_err());
    }

    #[test]
    fn linear_map_basics() {
        let t = LinearMap::diagonal(&[1.3, 0.9, 1.1]).unwrap();
        assert!((t.det_abs() - 1.287).abs() < 1e-12);
        let x = [0.2, -0.4, 0.7];
        let y = t.apply_inverse(&t.apply(&x));
        for i in 0..3 {
            assert!((x[i] - y[i]).abs() < 1e-15);
        }
        assert!(matches!(
            LinearMap::diagonal(&[1.0, 1e-9, 1.0]),
            Err(Error::IllConditioned(_))
        ));
    }
}
