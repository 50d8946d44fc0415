use std::sync::Arc;

use serde::Serialize;

use crate::bodies::{centroid_body, polar_intersection_body, StarBody};
use crate::error::{Error, Result};
use crate::numerics::{ball_volume, sphere_measure};
use crate::sphere::SphereGrid;
use crate::transforms::{eigenvalue_p_cosine_raw, eigenvalue_radon};

/// Closed forms and the ball-fixed-point quadrature route must agree to this relative tolerance.
pub const CONSTANT_TOLERANCE: f64 = 1e-8;

/// Grid used by the quadrature route; constants only need exactness on degree 0.
const BALL_GRID_RESOLUTION: usize = 4;

/// Constants for which the unit ball solves the three fixed-point equations.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantsTable {
    pub n: usize,
    pub p: f64,
    /// C_B in C_B·ΓB = B.
    pub c_b: f64,
    /// C_B in C_B·Γ_pB = B.
    pub c_b_p: f64,
    /// C′_B in Γ_pB = C′_B·I*B.
    pub c_b_prime: f64,
    /// The same three constants read off the operators applied to a sampled ball.
    pub quadrature: [f64; 3],
}

impl ConstantsTable {
    /// Largest relative disagreement between closed forms and quadrature.
    pub fn max_relative_error(&self) -> f64 {
        [self.c_b, self.c_b_p, self.c_b_prime]
            .iter()
            .zip(&self.quadrature)
            .map(|(a, b)| (a - b).abs() / a.abs())
            .fold(0.0, f64::max)
    }
}

/// C_B = (n+1)κ_n/(2κ_{n−1}).
pub fn c_b(n: usize) -> f64 {
    (n as f64 + 1.0) * ball_volume(n) / (2.0 * ball_volume(n - 1))
}

/// C_B,p = ((n+p)κ_n / C^p1)^{1/p} with C^p1 the raw p-cosine transform of 1.
pub fn c_b_p(n: usize, p: f64) -> Result<f64> {
    let cp1 = eigenvalue_p_cosine_raw(n, 0, p)?;
    Ok(((n as f64 + p) * ball_volume(n) / cp1).powf(1.0 / p))
}

/// C′_B = (R1/(n−1))·(C^p1/((n+p)κ_n))^{1/p}.
pub fn c_b_prime(n: usize, p: f64) -> Result<f64> {
    let r1 = eigenvalue_radon(n, 0)?;
    Ok(r1 / (n as f64 - 1.0) / c_b_p(n, p)?)
}

/// Closed-form constants, each confirmed by applying the sampled operators to the ball.
pub fn constants(n: usize, p: f64) -> Result<ConstantsTable> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "dimension must be >= 3, got {n}"
        )));
    }
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "p must be a finite value >= 1, got {p}"
        )));
    }
    let table = ConstantsTable {
        n,
        p,
        c_b: c_b(n),
        c_b_p: c_b_p(n, p)?,
        c_b_prime: c_b_prime(n, p)?,
        quadrature: ball_route(n, p)?,
    };
    let names = ["C_B", "C_B,p", "C'_B"];
    let closed = [table.c_b, table.c_b_p, table.c_b_prime];
    for ((name, &c), &q) in names.iter().zip(&closed).zip(&table.quadrature) {
        if !((c - q).abs() <= CONSTANT_TOLERANCE * c.abs()) {
            return Err(Error::QuadratureMismatch {
                what: format!("{name} at n={n}, p={p}"),
                closed: c,
                quadrature: q,
            });
        }
    }
    Ok(table)
}

/// 1/h_{ΓB}, 1/h_{Γ_pB} and h_{Γ_pB}/h_{I*B}, averaged over a sampled unit ball.
fn ball_route(n: usize, p: f64) -> Result<[f64; 3]> {
    let grid = Arc::new(SphereGrid::build(n, BALL_GRID_RESOLUTION)?);
    let ball = StarBody::ball(grid, 1.0)?;
    let sigma = sphere_measure(n);
    let h1 = centroid_body(&ball, 1.0)?.integrate() / sigma;
    let hp = centroid_body(&ball, p)?;
    let hstar = polar_intersection_body(&ball)?;
    let ratio = hp.zip_map(&hstar, |a, b| a / b)?.integrate() / sigma;
    Ok([1.0 / h1, sigma / hp.integrate(), ratio])
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn three_dimensional_values() {
        let t = constants(3, 1.0).unwrap();
        assert!((t.c_b - 8.0 / 3.0).abs() < 1e-14);
        assert!((t.c_b_p - t.c_b).abs() < 1e-13);
        // R1 = 2π, so C′_B = π / C_B
        assert!((t.c_b_prime - PI * 3.0 / 8.0).abs() < 1e-13);
        let t2 = constants(3, 2.0).unwrap();
        assert!((t2.c_b_p - 5f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn quadrature_agrees_across_dimensions() {
        for n in 3..=6 {
            for p in [1.0, 1.5, 2.0, 3.0, 4.5] {
                let t = constants(n, p).unwrap();
                assert!(t.max_relative_error() < 1e-12, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(constants(2, 1.0).is_err());
        assert!(constants(3, 0.5).is_err());
    }
}
