//! Multiplier spectra of the linearized operators, and cross-checks of every
//! eigenvalue formula against operators applied on a grid.

use std::sync::Arc;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{dot, gauss_jacobi, gegenbauer_normalized, sphere_measure};
use crate::sphere::frame::normalize;
use crate::sphere::{
    evaluate_kernel, multiplier_kernel, orthonormal_complement, SphereFunction, SphereGrid,
};
use crate::transforms::{
    contraction_check, eigenvalue_cosine, eigenvalue_p_cosine, eigenvalue_p_cosine_raw,
    eigenvalue_radon, p_cosine_multipliers_quadrature, radon_multipliers_quadrature,
    ContractionReport, SpectralOperator,
};

fn check_band(max_degree: usize, least: usize) -> Result<()> {
    if max_degree < least {
        return Err(Error::InvalidArgument(format!(
            "band limit must be >= {least}, got {max_degree}"
        )));
    }
    Ok(())
}

/// M = (C_B/κ_n)(C − CP₀ − CP₂): multipliers (n+1)μ_k/μ_0 for k ≥ 4, zero at degrees 0 and 2.
pub fn theorem1_operator_spectrum(
    n: usize,
    max_degree: usize,
) -> Result<(SpectralOperator, ContractionReport)> {
    check_band(max_degree, 6)?;
    let mu0 = eigenvalue_cosine(n, 0)?;
    let scale = (n as f64 + 1.0) / mu0;
    let multipliers = (0..=max_degree)
        .map(|k| Ok(scale * eigenvalue_cosine(n, k)?))
        .collect::<Result<Vec<_>>>()?;
    let op = SpectralOperator::new(n, "theorem1", multipliers).without_degrees(&[0, 2]);
    let report = contraction_check(&op, &[0, 2]);
    Ok((op, report))
}

/// The multipliers of [`theorem1_operator_spectrum`] from one-dimensional quadrature.
pub fn theorem1_multipliers_quadrature(n: usize, max_degree: usize) -> Result<Vec<f64>> {
    let q = p_cosine_multipliers_quadrature(n, 1.0, max_degree)?;
    let scale = (n as f64 + 1.0) / q[0];
    Ok(q.iter()
        .enumerate()
        .map(|(k, v)| if k == 0 || k == 2 { 0.0 } else { scale * v })
        .collect())
}

/// Linearized p-centroid operator: multipliers m_{p,k}/m_{p,2} = ((n+p)/p)·m_{p,k}/m_{p,0},
/// zero at degrees 0 and 2. Its degree-4 value has magnitude |2−p|/(n+2+p).
pub fn theorem2_operator_spectrum(
    n: usize,
    p: f64,
    max_degree: usize,
) -> Result<(SpectralOperator, ContractionReport)> {
    check_band(max_degree, 4)?;
    let m2 = eigenvalue_p_cosine(n, 2, p)?;
    let multipliers = (0..=max_degree)
        .map(|k| Ok(eigenvalue_p_cosine(n, k, p)? / m2))
        .collect::<Result<Vec<_>>>()?;
    let op =
        SpectralOperator::new(n, format!("theorem2(p={p})"), multipliers).without_degrees(&[0, 2]);
    let report = contraction_check(&op, &[0, 2]);
    Ok((op, report))
}

/// |m_{p,4}/m_{p,2}| from the eigenvalue formula.
pub fn theorem2_ratio(n: usize, p: f64) -> Result<f64> {
    Ok((eigenvalue_p_cosine(n, 4, p)? / eigenvalue_p_cosine(n, 2, p)?).abs())
}

/// Degree-wise view of (n+p)/(p(n−1))·R₁⁻¹∘C₁^p with R₁1 = C₁^p1 = 1.
#[derive(Debug, Clone, Serialize)]
pub struct Theorem3Spectrum {
    pub n: usize,
    pub p: f64,
    /// Signed multipliers; zero at odd degrees.
    pub operator: SpectralOperator,
    /// |multiplier| per degree.
    pub norms: Vec<f64>,
    /// |multiplier| per degree from the telescoping product formula.
    pub product: Vec<f64>,
    /// Same from quadrature multipliers of C^p and R.
    pub quadrature: Vec<f64>,
    /// Even degrees ≥ 4 lie below 1 and strictly decrease until they vanish.
    pub decreasing_below_one: bool,
}

impl Theorem3Spectrum {
    pub fn degree_two(&self) -> f64 {
        self.norms[2]
    }

    /// Largest |norm − product| and |norm − quadrature| over all degrees.
    pub fn route_discrepancy(&self) -> f64 {
        self.norms
            .iter()
            .zip(&self.product)
            .zip(&self.quadrature)
            .map(|((a, b), c)| (a - b).abs().max((a - c).abs()))
            .fold(0.0, f64::max)
    }
}

/// Signed multiplier of (n+p)/(p(n−1))·R⁻¹∘C^p at degree k, both factors normalized to
/// map 1 to 1; zero at odd degrees.
pub fn theorem3_multiplier(n: usize, p: f64, k: usize) -> Result<f64> {
    let nf = n as f64;
    let lead = (nf + p) / (p * (nf - 1.0));
    let c = eigenvalue_p_cosine(n, k, p)? / eigenvalue_p_cosine(n, 0, p)?;
    if k % 2 == 1 {
        return Ok(0.0);
    }
    Ok(lead * c / (eigenvalue_radon(n, k)? / eigenvalue_radon(n, 0)?))
}

/// Per-degree norms of the operator in the Theorem-3 linearization.
pub fn theorem3_operator_spectrum(n: usize, p: f64, max_degree: usize) -> Result<Theorem3Spectrum> {
    check_band(max_degree, 4)?;
    let nf = n as f64;
    let lead = (nf + p) / (p * (nf - 1.0));
    let mut signed = vec![0.0; max_degree + 1];
    for k in (0..=max_degree).step_by(2) {
        signed[k] = theorem3_multiplier(n, p, k)?;
    }
    let norms: Vec<f64> = signed.iter().map(|v| v.abs()).collect();

    // degree 2j: lead · Π_{i<j} |2i−p|(n+2i−1) / ((n+p+2i)(2i+1))
    let mut product = vec![0.0; max_degree + 1];
    let mut acc = lead;
    for k in (0..=max_degree).step_by(2) {
        product[k] = acc;
        let i = (k / 2) as f64;
        acc *= (2.0 * i - p).abs() * (nf + 2.0 * i - 1.0) / ((nf + p + 2.0 * i) * (2.0 * i + 1.0));
    }

    let qc = p_cosine_multipliers_quadrature(n, p, max_degree)?;
    let qr = radon_multipliers_quadrature(n, max_degree)?;
    let quadrature: Vec<f64> = (0..=max_degree)
        .map(|k| {
            if k % 2 == 1 {
                0.0
            } else {
                (lead * (qc[k] / qc[0]) / (qr[k] / qr[0])).abs()
            }
        })
        .collect();

    let tail: Vec<f64> = norms.iter().skip(4).step_by(2).copied().collect();
    let decreasing_below_one = tail.iter().all(|&v| v < 1.0)
        && tail
            .windows(2)
            .all(|w| w[1] < w[0] || (w[0] == 0.0 && w[1] == 0.0));
    Ok(Theorem3Spectrum {
        n,
        p,
        operator: SpectralOperator::new(n, format!("theorem3(p={p})"), signed),
        norms,
        product,
        quadrature,
        decreasing_below_one,
    })
}

/// Evaluation points along one meridian of a zonal function, with the weights
/// that turn sums over them into integrals over the sphere.
#[derive(Debug, Clone)]
pub struct Meridian {
    axis: Vec<f64>,
    pub t: Vec<f64>,
    pub weights: Vec<f64>,
    pub points: Vec<Vec<f64>>,
}

impl Meridian {
    /// Gauss–Jacobi rule for the weight σ_{n−2}(1−t²)^{(n−3)/2}; exact for zonal
    /// products of total degree below 2·`nodes`.
    pub fn new(axis: &[f64], nodes: usize) -> Result<Self> {
        let n = axis.len();
        if n < 3 {
            return Err(Error::InvalidArgument(format!(
                "dimension must be >= 3, got {n}"
            )));
        }
        let mut axis = axis.to_vec();
        normalize(&mut axis);
        let beta = (n as f64 - 3.0) / 2.0;
        let rule = gauss_jacobi(nodes, beta, beta)?;
        let omega = sphere_measure(n - 1);
        let side = orthonormal_complement(&axis).swap_remove(0);
        let points = rule
            .nodes
            .iter()
            .map(|&t| {
                let s = (1.0 - t * t).max(0.0).sqrt();
                axis.iter().zip(&side).map(|(a, b)| t * a + s * b).collect()
            })
            .collect();
        Ok(Self {
            axis,
            t: rule.nodes,
            weights: rule.weights.iter().map(|w| w * omega).collect(),
            points,
        })
    }

    pub fn axis(&self) -> &[f64] {
        &self.axis
    }

    /// ∫ f g dσ for zonal f, g given by their meridian samples.
    pub fn inner(&self, f: &[f64], g: &[f64]) -> f64 {
        self.weights
            .iter()
            .zip(f)
            .zip(g)
            .map(|((w, a), b)| w * a * b)
            .sum()
    }
}

/// A multiplier read back from a grid operator applied to a zonal harmonic.
#[derive(Debug, Clone, Serialize)]
pub struct MeasuredMultiplier {
    pub degree: usize,
    /// ⟨T Y_k, Y_k⟩ / ⟨Y_k, Y_k⟩.
    pub value: f64,
    /// ‖T Y_k − value·Y_k‖₂ / ‖Y_k‖₂: leakage out of H_k^n.
    pub leakage: f64,
}

/// Applies the multiplier operator to G_k(axis·θ) sampled on `grid` and measures its
/// action along a meridian.
pub fn measure_multiplier(
    grid: &Arc<SphereGrid>,
    multipliers: &[f64],
    k: usize,
    meridian: &Meridian,
) -> Result<MeasuredMultiplier> {
    let n = grid.n();
    let band = grid.max_band();
    if multipliers.len() > band + 1 {
        return Err(Error::BandLimit {
            requested: multipliers.len() - 1,
            supported: band,
        });
    }
    let lambda = (n as f64 - 2.0) / 2.0;
    let axis = meridian.axis();
    let y = SphereFunction::from_fn(grid.clone(), |x| {
        gegenbauer_normalized(k, lambda, dot(axis, x).clamp(-1.0, 1.0))
    });
    let out = evaluate_kernel(&y, &multiplier_kernel(n, multipliers), &meridian.points);
    let yk: Vec<f64> = meridian
        .t
        .iter()
        .map(|&t| gegenbauer_normalized(k, lambda, t))
        .collect();
    let norm2 = meridian.inner(&yk, &yk);
    let value = meridian.inner(&out, &yk) / norm2;
    let resid: Vec<f64> = out.iter().zip(&yk).map(|(a, b)| a - value * b).collect();
    let leakage = (meridian.inner(&resid, &resid).max(0.0) / norm2).sqrt();
    Ok(MeasuredMultiplier {
        degree: k,
        value,
        leakage,
    })
}

/// One row of the eigenvalue cross-validation.
#[derive(Debug, Clone, Serialize)]
pub struct EigenCheck {
    pub n: usize,
    pub transform: String,
    pub p: Option<f64>,
    pub degree: usize,
    pub closed: f64,
    pub measured: f64,
    /// |measured − closed| / |closed|, or relative to the degree-0 value when closed = 0.
    pub relative_error: f64,
    pub leakage: f64,
}

/// Compares grid-applied C^p (for each p) and R on zonal harmonics of degree ≤ L
/// with the closed-form eigenvalues.
pub fn eigenvalue_cross_validation(
    n: usize,
    resolution: usize,
    max_degree: usize,
    ps: &[f64],
) -> Result<Vec<EigenCheck>> {
    let grid = Arc::new(SphereGrid::build(n, resolution)?);
    if max_degree > grid.max_band() {
        return Err(Error::BandLimit {
            requested: max_degree,
            supported: grid.max_band(),
        });
    }
    let axis: Vec<f64> = (1..=n).map(|i| i as f64).collect();
    let meridian = Meridian::new(&axis, max_degree + 4)?;
    // (name, p, quadrature multipliers, closed forms)
    type Family = (&'static str, Option<f64>, Vec<f64>, Vec<f64>);
    let mut families: Vec<Family> = Vec::new();
    for &p in ps {
        let quad = p_cosine_multipliers_quadrature(n, p, max_degree)?;
        let closed = (0..=max_degree)
            .map(|k| eigenvalue_p_cosine_raw(n, k, p))
            .collect::<Result<Vec<_>>>()?;
        let name = if p == 1.0 { "cosine" } else { "p_cosine" };
        families.push((name, Some(p), quad, closed));
    }
    let quad = radon_multipliers_quadrature(n, max_degree)?;
    let closed = (0..=max_degree)
        .map(|k| eigenvalue_radon(n, k))
        .collect::<Result<Vec<_>>>()?;
    families.push(("radon", None, quad, closed));

    let mut rows = Vec::new();
    for (name, p, quad, closed) in families {
        for k in 0..=max_degree {
            let m = measure_multiplier(&grid, &quad, k, &meridian)?;
            let scale = if closed[k] != 0.0 {
                closed[k].abs()
            } else {
                closed[0].abs()
            };
            rows.push(EigenCheck {
                n,
                transform: name.to_string(),
                p,
                degree: k,
                closed: closed[k],
                measured: m.value,
                relative_error: (m.value - closed[k]).abs() / scale,
                leakage: m.leakage,
            });
        }
    }
    Ok(rows)
}
