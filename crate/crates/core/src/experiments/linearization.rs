//! First-order behaviour of the body operators near the ball, and the size of what
//! the linear models leave out.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::constants::c_b_prime;
use super::iteration::least_squares_scale;
use super::spectra::theorem3_operator_spectrum;
use crate::bodies::{centroid_body, polar_intersection_body, StarBody};
use crate::error::{Error, Result};
use crate::sphere::{decompose, unit_axis, zonal_harmonic, SphereFunction, SphereGrid};
use crate::transforms::{
    eigenvalue_p_cosine, eigenvalue_radon, p_cosine_transform, radon_inverse, SpectralOperator,
};

/// Which response [`linear_response`] measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResponseOperator {
    /// Relative change of h_{Γ_pK} per unit perturbation of ρ_K.
    Centroid,
    /// Ratio of the relative changes of h_{Γ_pK} and h_{I*K}.
    PolarIntersectionVsCentroid,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LinearResponse {
    pub degree: usize,
    pub epsilon: f64,
    pub operator: ResponseOperator,
    /// Coefficient of G_k in the relative change of the (first) output.
    pub coefficient: f64,
    /// Measured transfer factor.
    pub measured: f64,
    /// Multiplier prediction for the transfer factor.
    pub predicted: f64,
}

impl LinearResponse {
    pub fn error(&self) -> f64 {
        (self.measured - self.predicted).abs()
    }
}

fn zonal_body(
    grid: &Arc<SphereGrid>,
    k: usize,
    epsilon: f64,
) -> Result<(StarBody, SphereFunction)> {
    let y = zonal_harmonic(grid, k, &unit_axis(grid.n(), grid.n() - 1))?.function;
    let body = StarBody::new(y.map(|v| 1.0 + epsilon * v))?;
    Ok((body, y))
}

/// Coefficient of y in f/mean(f) − 1.
fn relative_coefficient(f: &SphereFunction, y: &SphereFunction) -> Result<f64> {
    let mean = f.mean();
    let u = f.map(|v| v / mean - 1.0);
    Ok(u.inner(y)? / y.inner(y)?)
}

/// Perturbs the unit ball by ε·G_k(e_n·θ) and compares the first-order response of the
/// chosen operator with its multiplier prediction.
///
/// For the centroid response the prediction is ((n+p)/p)·m_{p,k}/m_{p,0}; for the
/// ratio response it is the negated Theorem-3 multiplier.
pub fn linear_response(
    k: usize,
    epsilon: f64,
    n: usize,
    p: f64,
    operator: ResponseOperator,
    resolution: usize,
) -> Result<LinearResponse> {
    if !(epsilon > 0.0 && epsilon <= 0.05) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in (0, 0.05], got {epsilon}"
        )));
    }
    let grid = Arc::new(SphereGrid::build(n, resolution)?);
    if k > grid.max_band() {
        return Err(Error::BandLimit {
            requested: k,
            supported: grid.max_band(),
        });
    }
    let (body, y) = zonal_body(&grid, k, epsilon)?;
    let h = centroid_body(&body, p)?;
    let a = relative_coefficient(&h, &y)?;
    let nf = n as f64;
    let centroid_prediction =
        (nf + p) / p * eigenvalue_p_cosine(n, k, p)? / eigenvalue_p_cosine(n, 0, p)?;
    let (measured, predicted) = match operator {
        ResponseOperator::Centroid => (a / epsilon, centroid_prediction),
        ResponseOperator::PolarIntersectionVsCentroid => {
            if k % 2 == 1 {
                return Err(Error::InvalidArgument(
                    "the ratio response needs an even degree".into(),
                ));
            }
            let hstar = polar_intersection_body(&body)?;
            let b = relative_coefficient(&hstar, &y)?;
            let radon = eigenvalue_radon(n, k)? / eigenvalue_radon(n, 0)?;
            // h_{I*} ≈ const·(1 − (n−1)ν̂_k ε Y)
            let predicted = centroid_prediction / (-(nf - 1.0) * radon);
            (a / b, predicted)
        }
    };
    Ok(LinearResponse {
        degree: k,
        epsilon,
        operator,
        coefficient: a,
        measured,
        predicted,
    })
}

/// Residual of the first-order model of (C^p ρ^α)^β along one perturbation direction.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualSweep {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub p: f64,
    pub degree: usize,
    pub epsilons: Vec<f64>,
    pub residuals: Vec<f64>,
    /// Least-squares slope of log residual against log ε.
    pub slope: f64,
}

/// Least-squares slope of log y against log x.
pub fn log_log_slope(x: &[f64], y: &[f64]) -> f64 {
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    let m = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / m;
    let my = ly.iter().sum::<f64>() / m;
    let sxy: f64 = lx.iter().zip(&ly).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = lx.iter().map(|a| (a - mx).powi(2)).sum();
    sxy / sxx
}

fn check_epsilons(eps: &[f64]) -> Result<()> {
    if eps.len() < 3 {
        return Err(Error::InvalidArgument(
            "at least three epsilon values are needed".into(),
        ));
    }
    if eps.iter().any(|&e| !(e > 0.0 && e <= 0.1)) {
        return Err(Error::InvalidArgument(
            "epsilon values must lie in (0, 0.1]".into(),
        ));
    }
    if eps.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "epsilon values must be strictly increasing".into(),
        ));
    }
    Ok(())
}

/// For ρ = 1 + ε·G_k(e_n·θ), sup-norm of
/// (C^pρ^α)^β − [r₀^{αβ}(C^p1)^β + αβ(C^p1)^{β−1} r₀^{αβ−1} C^p(ρ − r₀)] per ε.
pub fn linearization_error_sweep(
    alpha: f64,
    beta: f64,
    p: f64,
    epsilons: &[f64],
    n: usize,
    degree: usize,
    resolution: usize,
) -> Result<ResidualSweep> {
    check_epsilons(epsilons)?;
    let grid = Arc::new(SphereGrid::build(n, resolution)?);
    let y = zonal_harmonic(&grid, degree, &unit_axis(n, n - 1))?.function;
    let c1 = p_cosine_transform(&SphereFunction::constant(grid.clone(), 1.0), p)?.mean();
    let residuals = epsilons
        .iter()
        .map(|&eps| {
            let rho = y.map(|v| 1.0 + eps * v);
            let r0 = rho.mean();
            let exact = p_cosine_transform(&rho.powf(alpha), p)?.map(|v| v.powf(beta));
            let linear = p_cosine_transform(&rho.map(|v| v - r0), p)?;
            let model = linear.map(|v| {
                r0.powf(alpha * beta) * c1.powf(beta)
                    + alpha * beta * c1.powf(beta - 1.0) * r0.powf(alpha * beta - 1.0) * v
            });
            Ok(exact.sub(&model)?.sup_norm())
        })
        .collect::<Result<Vec<_>>>()?;
    let slope = log_log_slope(epsilons, &residuals);
    Ok(ResidualSweep {
        n,
        alpha,
        beta,
        p,
        degree,
        epsilons: epsilons.to_vec(),
        residuals,
        slope,
    })
}

/// Residual of the constant-plus-linear model of R₁⁻¹[(C₁^pρ^{n+p})^{−1/p}].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BinomialCheck {
    pub n: usize,
    pub p: f64,
    pub epsilon: f64,
    /// sup |exact − (constant + linear)|.
    pub residual: f64,
    /// residual / ε², or 0 at ε = 0.
    pub constant: f64,
}

/// With R₁1 = C₁^p1 = 1 and ρ = r₀ + γ, the model is
/// r₀^{−(n+p)/p} − (n−1)·r₀^{−(n+p)/p−1}·T₃γ, T₃ = (n+p)/(p(n−1))·R₁⁻¹∘C₁^p.
pub fn binomial_linearization_check(
    n: usize,
    p: f64,
    epsilon: f64,
    resolution: usize,
) -> Result<BinomialCheck> {
    if !(0.0..=0.05).contains(&epsilon) {
        return Err(Error::InvalidArgument(format!(
            "epsilon must lie in [0, 0.05], got {epsilon}"
        )));
    }
    let grid = Arc::new(SphereGrid::build(n, resolution)?);
    let band = grid.max_band();
    let y = zonal_harmonic(&grid, 4, &unit_axis(n, n - 1))?.function;
    let rho = y.map(|v| 1.0 + epsilon * v);
    let r0 = rho.mean();
    let gamma = rho.map(|v| v - r0);
    let nf = n as f64;

    let c1 = p_cosine_transform(&SphereFunction::constant(grid.clone(), 1.0), p)?.mean();
    let r1 = eigenvalue_radon(n, 0)?;
    let inner = p_cosine_transform(&rho.powf(nf + p), p)?.map(|v| (v / c1).powf(-1.0 / p));
    let (exact, _) = radon_inverse(&inner, band)?;
    let exact = exact.scale(r1);

    let spectrum = theorem3_operator_spectrum(n, p, band.max(4))?;
    let t3 = SpectralOperator::new(
        n,
        "theorem3",
        spectrum.operator.multipliers[..=band].to_vec(),
    );
    let lead = r0.powf(-(nf + p) / p);
    let linear = t3.apply(&gamma)?;
    let model = linear.map(|v| lead - (nf - 1.0) * lead / r0 * v);
    let residual = exact.sub(&model)?.sup_norm();
    Ok(BinomialCheck {
        n,
        p,
        epsilon,
        residual,
        constant: if epsilon > 0.0 {
            residual / (epsilon * epsilon)
        } else {
            0.0
        },
    })
}

/// One even degree of the comparison between the two sides of cΓ_pK = I*K.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegreeTransfer {
    pub degree: usize,
    /// ‖P_k(h_{Γ_pK}/mean − 1)‖₂.
    pub centroid_side: f64,
    /// ‖P_k(h_{I*K}/mean − 1)‖₂.
    pub istar_side: f64,
    pub ratio: f64,
    pub theorem3_norm: f64,
}

/// Fit of h_{Γ_pK} = c·h_{I*K} on the grid.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IStarComparison {
    pub n: usize,
    pub p: f64,
    pub c_fit: f64,
    pub c_b_prime: f64,
    /// sup |c·h_{I*K} − h_{Γ_pK}| / mean h_{Γ_pK}.
    pub residual: f64,
    pub transfer: Vec<DegreeTransfer>,
}

/// Largest degree listed in the transfer table.
const TRANSFER_MAX_DEGREE: usize = 8;
/// Components smaller than this are left out of the transfer table.
const TRANSFER_FLOOR: f64 = 1e-12;

pub fn compare_istar(body: &StarBody, p: f64) -> Result<IStarComparison> {
    let n = body.n();
    let h_gamma = centroid_body(body, p)?;
    let h_star = polar_intersection_body(body)?;
    let c_fit = least_squares_scale(&h_star, &h_gamma)?;
    let residual = h_star.scale(c_fit).sub(&h_gamma)?.sup_norm() / h_gamma.mean();
    let band = body.grid().max_band().min(TRANSFER_MAX_DEGREE);
    let rel = |f: &SphereFunction| {
        let m = f.mean();
        f.map(|v| v / m - 1.0)
    };
    let sg = decompose(&rel(&h_gamma), band)?;
    let ss = decompose(&rel(&h_star), band)?;
    let t3 = theorem3_operator_spectrum(n, p, band.max(4))?;
    let transfer = (2..=band)
        .step_by(2)
        .filter(|&k| ss.energy(k) > TRANSFER_FLOOR)
        .map(|k| DegreeTransfer {
            degree: k,
            centroid_side: sg.energy(k),
            istar_side: ss.energy(k),
            ratio: sg.energy(k) / ss.energy(k),
            theorem3_norm: t3.norms[k],
        })
        .collect();
    Ok(IStarComparison {
        n,
        p,
        c_fit,
        c_b_prime: c_b_prime(n, p)?,
        residual,
        transfer,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::BodySpec;

    #[test]
    fn centroid_response_degree_two_and_four() {
        let r2 = linear_response(2, 0.01, 3, 1.0, ResponseOperator::Centroid, 10).unwrap();
        assert!((r2.predicted - 1.0).abs() < 1e-14);
        assert!(r2.error() < 0.05);
        let r4 = linear_response(4, 0.01, 3, 1.0, ResponseOperator::Centroid, 10).unwrap();
        assert!((r4.predicted + 1.0 / 6.0).abs() < 1e-14);
        assert!(r4.error() < 0.02);
    }

    #[test]
    fn odd_degree_has_no_response() {
        let r = linear_response(3, 0.02, 3, 1.0, ResponseOperator::Centroid, 10).unwrap();
        assert!(r.coefficient.abs() < 0.02 * 0.02);
        assert_eq!(r.predicted, 0.0);
    }

    #[test]
    fn ratio_response_matches_theorem3() {
        let r = linear_response(
            4,
            0.005,
            3,
            1.0,
            ResponseOperator::PolarIntersectionVsCentroid,
            10,
        )
        .unwrap();
        assert!((r.predicted.abs() - 2.0 / 9.0).abs() < 1e-14);
        assert!(r.error() < 0.02, "{r:?}");
    }

    #[test]
    fn sweep_is_second_order() {
        let s = linearization_error_sweep(4.0, 1.0, 1.0, &[0.01, 0.02, 0.04], 3, 4, 10).unwrap();
        assert!((s.slope - 2.0).abs() < 0.2, "{s:?}");
        assert!(linearization_error_sweep(4.0, 1.0, 1.0, &[0.02, 0.01, 0.04], 3, 4, 10).is_err());
    }

    #[test]
    fn binomial_residual_scales_quadratically() {
        let a = binomial_linearization_check(3, 1.0, 0.01, 12).unwrap();
        let b = binomial_linearization_check(3, 1.0, 0.02, 12).unwrap();
        let ratio = b.residual / a.residual;
        assert!((3.0..=5.0).contains(&ratio), "{ratio}");
        let zero = binomial_linearization_check(3, 1.0, 0.0, 12).unwrap();
        assert!(zero.residual < 1e-12);
    }

    #[test]
    fn istar_on_ball_and_ellipsoid() {
        let g = Arc::new(SphereGrid::build(3, 12).unwrap());
        let b = StarBody::ball(g.clone(), 1.0).unwrap();
        let c = compare_istar(&b, 1.0).unwrap();
        assert!(c.residual < 1e-12);
        assert!((c.c_fit - c.c_b_prime).abs() < 1e-12);
        let axes = [1.1, 1.0, 0.95];
        let e = StarBody::from_spec(
            g,
            &BodySpec::Ellipsoid {
                axes: axes.to_vec(),
            },
        )
        .unwrap();
        let c = compare_istar(&e, 1.0).unwrap();
        let det: f64 = axes.iter().product();
        assert!(c.residual < 1e-4, "{c:?}");
        assert!((c.c_fit / (c.c_b_prime * det) - 1.0).abs() < 1e-4);
    }
}
