//! Special functions, quadrature rules and small dense linear algebra.

pub mod factorial;
pub mod gamma;
pub mod gegenbauer;
pub mod matrix;
pub mod measure;
pub mod quadrature;

pub use factorial::{double_factorial, double_factorial_ratio, ln_double_factorial};
pub use gamma::{gamma_fn, gamma_ratio, ln_gamma};
pub use gegenbauer::{gegenbauer, gegenbauer_normalized, ZonalRecurrence};
pub use matrix::{cholesky_solve, spd_eigen, Eigen, Lu, SymmetricMatrix};
pub use measure::{ball_volume, sphere_measure};
pub use quadrature::{gauss_jacobi, gauss_legendre, GaussRule};

const PAIRWISE_BLOCK: usize = 32;

/// Pairwise summation; the result depends only on the order of `values`.
pub fn pairwise_sum(values: &[f64]) -> f64 {
    if values.len() <= PAIRWISE_BLOCK {
        return values.iter().sum();
    }
    let mid = values.len() / 2;
    pairwise_sum(&values[..mid]) + pairwise_sum(&values[mid..])
}

/// Euclidean dot product.
#[inline]
pub fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
pub fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairwise_matches_exact_on_integers() {
        let v: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&v), 500_500.0);
    }

    #[test]
    fn gegenbauer_orthogonality_under_gauss_legendre() {
        // t = cos(s) turns the weight into sin^{n-2}(s) on [0, pi]
        let rule = gauss_legendre(40)
            .unwrap()
            .affine(0.0, std::f64::consts::PI);
        for n in 3..=6usize {
            let lambda = (n as f64 - 2.0) / 2.0;
            for j in 0..8 {
                for k in 0..j {
                    let ip = rule.integrate(|s| {
                        let t = s.cos();
                        gegenbauer(j, lambda, t)
                            * gegenbauer(k, lambda, t)
                            * s.sin().powi(n as i32 - 2)
                    });
                    assert!(ip.abs() < 1e-8, "n={n} j={j} k={k}: {ip}");
                }
            }
        }
    }
}
