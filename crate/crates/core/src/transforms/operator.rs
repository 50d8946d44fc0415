use serde::Serialize;

use super::closed::{eigenvalue_cosine, eigenvalue_p_cosine_raw, eigenvalue_radon};
use super::funk_hecke::{p_cosine_multipliers_quadrature, radon_multipliers_quadrature};
use crate::error::{Error, Result};
use crate::sphere::{apply_kernel, multiplier_kernel, SphereFunction};

/// Largest odd-degree L² energy tolerated by the band-limited Radon inverse.
pub const ODD_ENERGY_TOLERANCE: f64 = 1e-8;

/// An operator acting on H_k^n by multiplication with `multipliers[k]`, k ≤ L.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralOperator {
    pub n: usize,
    pub name: String,
    pub multipliers: Vec<f64>,
}

/// Named multiplier families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OperatorName {
    Cosine,
    PCosine(f64),
    Radon,
    RadonInverse,
}

impl SpectralOperator {
    pub fn new(n: usize, name: impl Into<String>, multipliers: Vec<f64>) -> Self {
        Self {
            n,
            name: name.into(),
            multipliers,
        }
    }

    pub fn identity(n: usize, max_degree: usize) -> Self {
        Self::new(n, "identity", vec![1.0; max_degree + 1])
    }

    pub fn max_degree(&self) -> usize {
        self.multipliers.len() - 1
    }

    pub fn multiplier(&self, k: usize) -> f64 {
        self.multipliers.get(k).copied().unwrap_or(0.0)
    }

    /// Pointwise product of multipliers over the common band.
    pub fn compose(&self, other: &SpectralOperator) -> Result<SpectralOperator> {
        if self.n != other.n {
            return Err(Error::InvalidArgument(format!(
                "cannot compose operators on dimensions {} and {}",
                self.n, other.n
            )));
        }
        let len = self.multipliers.len().min(other.multipliers.len());
        Ok(Self::new(
            self.n,
            format!("{}∘{}", self.name, other.name),
            (0..len)
                .map(|k| self.multipliers[k] * other.multipliers[k])
                .collect(),
        ))
    }

    pub fn scaled(&self, c: f64, name: impl Into<String>) -> SpectralOperator {
        Self::new(
            self.n,
            name,
            self.multipliers.iter().map(|m| c * m).collect(),
        )
    }

    /// Same operator with the listed degrees set to zero.
    pub fn without_degrees(&self, degrees: &[usize]) -> SpectralOperator {
        let mut out = self.clone();
        for &k in degrees {
            if k < out.multipliers.len() {
                out.multipliers[k] = 0.0;
            }
        }
        out
    }

    /// Applies the operator to the band-≤L part of f through the zonal-kernel quadrature.
    pub fn apply(&self, f: &SphereFunction) -> Result<SphereFunction> {
        let band = f.grid().max_band();
        if self.max_degree() > band {
            return Err(Error::BandLimit {
                requested: self.max_degree(),
                supported: band,
            });
        }
        if f.grid().n() != self.n {
            return Err(Error::GridMismatch);
        }
        Ok(apply_kernel(
            f,
            &multiplier_kernel(self.n, &self.multipliers),
        ))
    }
}

/// Closed-form multiplier table for a named operator. Raw measure convention.
pub fn as_multiplier(name: OperatorName, n: usize, max_degree: usize) -> Result<SpectralOperator> {
    let (label, values) = match name {
        OperatorName::Cosine => (
            "cosine".to_string(),
            (0..=max_degree)
                .map(|k| eigenvalue_cosine(n, k))
                .collect::<Result<Vec<_>>>()?,
        ),
        OperatorName::PCosine(p) => (
            format!("p_cosine({p})"),
            (0..=max_degree)
                .map(|k| eigenvalue_p_cosine_raw(n, k, p))
                .collect::<Result<Vec<_>>>()?,
        ),
        OperatorName::Radon => (
            "radon".to_string(),
            (0..=max_degree)
                .map(|k| eigenvalue_radon(n, k))
                .collect::<Result<Vec<_>>>()?,
        ),
        OperatorName::RadonInverse => (
            "radon_inverse".to_string(),
            (0..=max_degree)
                .map(|k| {
                    let v = eigenvalue_radon(n, k)?;
                    Ok(if k % 2 == 0 { 1.0 / v } else { 0.0 })
                })
                .collect::<Result<Vec<_>>>()?,
        ),
    };
    Ok(SpectralOperator::new(n, label, values))
}

/// Result of [`contraction_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ContractionReport {
    /// sup |c_k| over degrees outside the skip set.
    pub max_abs: f64,
    /// Degree attaining `max_abs`.
    pub argmax: Option<usize>,
    /// |c_k| non-increasing along the even degrees outside the skip set.
    pub decreasing: bool,
    /// The tail has decayed: non-increasing and the last even |c_k| is at most a quarter of `max_abs`.
    pub limit_zero: bool,
}

impl ContractionReport {
    /// All |c_k| < 1 and the multipliers tend to zero.
    pub fn is_strong_contraction(&self) -> bool {
        self.max_abs < 1.0 && self.limit_zero
    }
}

pub fn contraction_check(op: &SpectralOperator, skip_degrees: &[usize]) -> ContractionReport {
    let kept: Vec<(usize, f64)> = op
        .multipliers
        .iter()
        .enumerate()
        .filter(|(k, _)| !skip_degrees.contains(k))
        .map(|(k, v)| (k, v.abs()))
        .collect();
    let (argmax, max_abs) =
        kept.iter().fold(
            (None, 0.0f64),
            |(am, m), &(k, v)| if v > m { (Some(k), v) } else { (am, m) },
        );
    let even: Vec<f64> = kept
        .iter()
        .filter(|(k, _)| k % 2 == 0)
        .map(|&(_, v)| v)
        .collect();
    let decreasing = even.windows(2).all(|w| w[1] <= w[0]);
    let strictly = even.windows(2).all(|w| w[1] < w[0] || w[0] == 0.0);
    let last = even.last().copied().unwrap_or(0.0);
    let limit_zero = decreasing && strictly && last <= 0.25 * max_abs;
    ContractionReport {
        max_abs,
        argmax,
        decreasing,
        limit_zero,
    }
}

/// C f on the grid of f: multipliers from one-dimensional quadrature, applied at the grid's band.
pub fn cosine_transform(f: &SphereFunction) -> Result<SphereFunction> {
    p_cosine_transform(f, 1.0)
}

/// C^p f on the grid of f.
pub fn p_cosine_transform(f: &SphereFunction, p: f64) -> Result<SphereFunction> {
    if !(p >= 1.0) {
        return Err(Error::InvalidArgument(format!("p must be >= 1, got {p}")));
    }
    let n = f.grid().n();
    let band = f.grid().max_band();
    let m = p_cosine_multipliers_quadrature(n, p, band)?;
    SpectralOperator::new(n, format!("p_cosine({p})"), m).apply(f)
}

/// R f on the grid of f.
pub fn radon_transform(f: &SphereFunction) -> Result<SphereFunction> {
    let n = f.grid().n();
    let band = f.grid().max_band();
    let m = radon_multipliers_quadrature(n, band)?;
    SpectralOperator::new(n, "radon", m).apply(f)
}

/// Band-limited inverse Radon transform of an even function, with the condition
/// number max|ν_k|/min|ν_k| over the even degrees used.
pub fn radon_inverse(f: &SphereFunction, max_degree: usize) -> Result<(SphereFunction, f64)> {
    let odd = f.odd_norm();
    if odd > ODD_ENERGY_TOLERANCE {
        return Err(Error::OddComponent(odd));
    }
    let n = f.grid().n();
    let op = as_multiplier(OperatorName::RadonInverse, n, max_degree)?;
    let even: Vec<f64> = op.multipliers.iter().step_by(2).map(|v| v.abs()).collect();
    let cond = even.iter().copied().fold(0.0, f64::max)
        / even.iter().copied().fold(f64::INFINITY, f64::min);
    log::debug!("radon inverse up to degree {max_degree}: condition number {cond:.3e}");
    Ok((op.apply(f)?, cond))
}
