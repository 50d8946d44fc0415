//! Affine normalization, distance to the ball and convexity diagnostics.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::body::{LinearMap, StarBody};
use super::ops::{apply_linear, legendre_matrix};
use crate::error::{Error, Result};
use crate::numerics::{dot, sphere_measure};
use crate::sphere::frame::normalize;
use crate::sphere::{decompose, BandLimited, SphereFunction};

/// Off-diagonal/trace target for the Legendre matrix in isotropic position.
pub const ISOTROPY_TOLERANCE: f64 = 1e-12;
const ISOTROPY_STEPS: usize = 8;

/// Relative curvature margin below which `convexity_check` reports failure.
pub const CONVEXITY_TOLERANCE: f64 = 1e-6;
const SAMPLES_PER_PLANE: usize = 64;

/// Volume-preserving map T = s·M^{-1/2} with TK in isotropic position.
///
/// The map is refined by re-measuring the Legendre matrix of the resampled body;
/// every candidate is resampled from the original body, so interpolation error
/// does not accumulate.
pub fn isotropic_position(body: &StarBody) -> Result<(StarBody, LinearMap)> {
    if !body.is_origin_symmetric() {
        return Err(Error::InvalidBody(
            "isotropic positioning needs an origin-symmetric body".into(),
        ));
    }
    let n = body.n();
    let mut total = LinearMap::identity(n);
    let mut current = body.clone();
    for step in 0..ISOTROPY_STEPS {
        let m = legendre_matrix(&current)?;
        let ratio = m.off_diagonal_ratio().max(m.anisotropy());
        log::debug!("isotropic step {step}: anisotropy {ratio:.3e}");
        if ratio <= ISOTROPY_TOLERANCE {
            break;
        }
        let inv_sqrt = m.spectral_map(|l| l.max(f64::MIN_POSITIVE).powf(-0.5))?;
        let t = LinearMap::from_symmetric(&inv_sqrt)?;
        let t = t.scaled(t.det_abs().powf(-1.0 / n as f64))?;
        total = t.compose(&total)?;
        current = apply_linear(body, &total)?;
    }
    Ok((current, total))
}

/// Deviation of a body from the unit ball after isotropic positioning and
/// rescaling to mean radius 1.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BodyDistanceReport {
    /// max |ρ − 1|.
    pub sup_deviation: f64,
    /// ‖ρ − 1‖₂.
    pub l2_deviation: f64,
    /// ‖P_k(ρ − 1)‖₂ for k = 0..=L.
    pub harmonic_energies: Vec<f64>,
}

impl BodyDistanceReport {
    /// sup ≥ l2/√σ_{n−1} up to rounding.
    pub fn is_consistent(&self, n: usize) -> bool {
        let bound = self.l2_deviation / sphere_measure(n).sqrt();
        self.sup_deviation >= bound * (1.0 - 1e-12) - 1e-15
            && self.harmonic_energies.iter().all(|&e| e >= 0.0)
    }
}

/// Non-symmetric bodies are measured without positioning.
pub fn distance_to_ball(body: &StarBody) -> Result<BodyDistanceReport> {
    let positioned = if body.is_origin_symmetric() {
        isotropic_position(body)?.0
    } else {
        log::warn!(
            "body is not origin-symmetric; measuring distance without isotropic positioning"
        );
        body.clone()
    };
    Ok(deviation_from_unit(&positioned))
}

/// Report for the body rescaled to mean radius 1, without positioning.
pub fn deviation_from_unit(body: &StarBody) -> BodyDistanceReport {
    let r0 = body.mean_radius();
    let dev = body.radial().map(|r| r / r0 - 1.0);
    let spectrum = decompose(&dev, dev.grid().max_band()).expect("band equals the grid band");
    BodyDistanceReport {
        sup_deviation: dev.sup_norm(),
        l2_deviation: dev.l2_norm(),
        harmonic_energies: spectrum.energies().to_vec(),
    }
}

/// Result of [`convexity_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvexityReport {
    /// min over sampled circles of (h + h'')/mean(h).
    pub min_margin: f64,
    /// Index of the plane attaining the minimum.
    pub worst_plane: usize,
    pub planes: usize,
}

/// Tests sublinearity of h along `planes` random great circles.
///
/// The 1-homogeneous extension of h is convex iff h + h'' ≥ 0 along every great
/// circle; h'' is taken from the band-limited interpolant of the samples.
pub fn convexity_check(h: &SphereFunction, planes: usize, seed: u64) -> Result<ConvexityReport> {
    let n = h.grid().n();
    let interp = BandLimited::full_band(h);
    let scale = h.mean().abs().max(f64::MIN_POSITIVE);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = ConvexityReport {
        min_margin: f64::INFINITY,
        worst_plane: 0,
        planes,
    };
    for plane in 0..planes {
        let (u, v) = random_plane(&mut rng, n);
        for j in 0..SAMPLES_PER_PLANE {
            let s = std::f64::consts::PI * j as f64 / SAMPLES_PER_PLANE as f64;
            let (c, sn) = (s.cos(), s.sin());
            let theta: Vec<f64> = u.iter().zip(&v).map(|(a, b)| c * a + sn * b).collect();
            let tangent: Vec<f64> = u.iter().zip(&v).map(|(a, b)| -sn * a + c * b).collect();
            let jet = interp.jet(&theta);
            let mut quad = 0.0;
            for a in 0..n {
                for b in 0..n {
                    quad += tangent[a] * jet.hess[a * n + b] * tangent[b];
                }
            }
            // h'' = t·∇²H t − θ·∇H along the circle
            let h2 = quad - dot(&theta, &jet.grad);
            let margin = (jet.value + h2) / scale;
            if margin < report.min_margin {
                report.min_margin = margin;
                report.worst_plane = plane;
            }
        }
    }
    if report.min_margin < -CONVEXITY_TOLERANCE {
        return Err(Error::NotConvex {
            margin: report.min_margin,
            plane: report.worst_plane,
        });
    }
    Ok(report)
}

fn random_plane(rng: &mut ChaCha8Rng, n: usize) -> (Vec<f64>, Vec<f64>) {
    loop {
        let mut u: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let mut v: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        if normalize(&mut u) < 1e-3 {
            continue;
        }
        let d = dot(&u, &v);
        v.iter_mut().zip(&u).for_each(|(x, y)| *x -= d * y);
        if normalize(&mut v) < 1e-3 {
            continue;
        }
        return (u, v);
    }
}
