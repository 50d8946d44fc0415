//! The fixed-point map K ↦ c·Γ_pK iterated on sampled bodies, and estimates of the
//! constant c for bodies that are not exact solutions.

use serde::{Deserialize, Serialize};

use super::constants::c_b_p;
use crate::bodies::{
    apply_linear, centroid_body, convexity_check, deviation_from_unit, distance_to_ball,
    isotropic_position, radial_from_support, support_on_grid, BodyDistanceReport, LinearMap,
    StarBody,
};
use crate::error::{Error, Result};
use crate::numerics::ball_volume;
use crate::sphere::{GridDescriptor, SphereFunction};

/// Isotropic-normalized sup deviation at which an iteration counts as converged.
pub const CONVERGENCE_THRESHOLD: f64 = 1e-6;
/// Hard cap on iteration length.
pub const MAX_STEPS: usize = 50;
/// Largest initial isotropic-normalized deviation accepted by [`iterate_fixed_point`].
pub const MAX_INITIAL_DEVIATION: f64 = 0.15;

const CONVEXITY_PLANES: usize = 8;
/// Per-degree amplitudes below this are treated as numerically zero when fitting rates.
const RATE_FLOOR: f64 = 1e-11;

/// How each iterate is rescaled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Renormalize {
    /// Mean radius r₀ = 1.
    #[default]
    MeanRadius,
    /// vol = κ_n.
    Volume,
}

/// Options for [`iterate_fixed_point`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IterationOptions {
    pub p: f64,
    pub steps: usize,
    pub renormalize: Renormalize,
    /// Move every iterate to isotropic position before the next step.
    pub isotropic_each_step: bool,
    /// Seed of the random planes used by the convexity check.
    pub seed: u64,
}

impl Default for IterationOptions {
    fn default() -> Self {
        Self {
            p: 1.0,
            steps: 12,
            renormalize: Renormalize::MeanRadius,
            isotropic_each_step: false,
            seed: 0,
        }
    }
}

/// Record of one application of the map.
#[derive(Debug, Clone, Serialize)]
pub struct IterationStep {
    pub step: usize,
    /// Isotropic-normalized distance of the new iterate to the ball.
    pub distance: BodyDistanceReport,
    /// ‖P_k(ρ − r₀)‖₂ of the new iterate, without repositioning.
    pub energies: Vec<f64>,
    /// Least-squares c in c·ρ_{Γ_pK} ≈ ρ_K for the body the step started from.
    pub c_hat: f64,
    pub convexity_margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct IterationTrace {
    pub n: usize,
    pub p: f64,
    /// Isotropic-normalized sup deviation of the starting body.
    pub epsilon0: f64,
    pub grid: GridDescriptor,
    pub options: IterationOptions,
    pub initial: BodyDistanceReport,
    pub initial_energies: Vec<f64>,
    pub steps: Vec<IterationStep>,
    pub converged: bool,
    /// Geometric-mean per-step amplitude ratio of each degree, where measurable.
    pub decay_rates: Vec<Option<f64>>,
}

impl IterationTrace {
    /// Amplitude ratio of degree k between consecutive iterates; entry t compares
    /// step t with the state before it.
    pub fn step_ratios(&self, k: usize) -> Vec<f64> {
        let mut prev = self.initial_energies.get(k).copied().unwrap_or(0.0);
        self.steps
            .iter()
            .map(|s| {
                let cur = s.energies.get(k).copied().unwrap_or(0.0);
                let r = cur / prev;
                prev = cur;
                r
            })
            .collect()
    }

    pub fn final_distance(&self) -> &BodyDistanceReport {
        self.steps
            .last()
            .map(|s| &s.distance)
            .unwrap_or(&self.initial)
    }
}

fn centered_energies(body: &StarBody) -> Vec<f64> {
    let r0 = body.mean_radius();
    // ‖P_k(ρ − r₀)‖ = r₀‖P_k(ρ/r₀ − 1)‖
    deviation_from_unit(body)
        .harmonic_energies
        .into_iter()
        .map(|e| e * r0)
        .collect()
}

fn renormalized(body: StarBody, mode: Renormalize) -> Result<StarBody> {
    let s = match mode {
        Renormalize::MeanRadius => 1.0 / body.mean_radius(),
        Renormalize::Volume => (ball_volume(body.n()) / body.volume()).powf(1.0 / body.n() as f64),
    };
    body.scaled(s)
}

/// c minimizing ‖c·a − b‖₂ over the grid.
pub fn least_squares_scale(a: &SphereFunction, b: &SphereFunction) -> Result<f64> {
    Ok(a.inner(b)? / a.inner(a)?)
}

/// Iterates K ↦ radial_from_support(h_{Γ_pK}) with rescaling, recording the distance to the
/// ball after isotropic positioning.
pub fn iterate_fixed_point(k0: &StarBody, options: IterationOptions) -> Result<IterationTrace> {
    if !k0.is_origin_symmetric() {
        return Err(Error::InvalidBody(
            "iteration needs an origin-symmetric body".into(),
        ));
    }
    let initial = distance_to_ball(k0)?;
    if initial.sup_deviation > MAX_INITIAL_DEVIATION {
        return Err(Error::TooFarFromBall(initial.sup_deviation));
    }
    let steps = options.steps.min(MAX_STEPS);
    let p = options.p;
    let mut current = renormalized(k0.clone(), options.renormalize)?;
    let initial_energies = centered_energies(&current);
    let mut records = Vec::with_capacity(steps);
    let mut converged = false;
    for step in 1..=steps {
        let h = centroid_body(&current, p)?;
        let convexity =
            convexity_check(&h, CONVEXITY_PLANES, options.seed.wrapping_add(step as u64))?;
        let image = StarBody::new(radial_from_support(&h)?)?;
        let c_hat = least_squares_scale(image.radial(), current.radial())?;
        let mut next = renormalized(image, options.renormalize)?;
        if options.isotropic_each_step {
            next = renormalized(isotropic_position(&next)?.0, options.renormalize)?;
        }
        let distance = distance_to_ball(&next)?;
        let energies = centered_energies(&next);
        log::info!(
            "step {step}: sup deviation {:.3e}, c_hat {c_hat:.12}",
            distance.sup_deviation
        );
        let done = distance.sup_deviation <= CONVERGENCE_THRESHOLD;
        records.push(IterationStep {
            step,
            distance,
            energies,
            c_hat,
            convexity_margin: convexity.min_margin,
        });
        current = next;
        if done {
            converged = true;
            break;
        }
    }
    let max_degree = initial_energies.len();
    let decay_rates = (0..max_degree)
        .map(|k| {
            let mut prev = initial_energies[k];
            let mut logs = Vec::new();
            for s in &records {
                let cur = s.energies[k];
                if prev > RATE_FLOOR && cur > RATE_FLOOR {
                    logs.push((cur / prev).ln());
                }
                prev = cur;
            }
            (converged && !logs.is_empty())
                .then(|| (logs.iter().sum::<f64>() / logs.len() as f64).exp())
        })
        .collect();
    Ok(IterationTrace {
        n: k0.n(),
        p,
        epsilon0: initial.sup_deviation,
        grid: k0.grid().descriptor(),
        options,
        initial,
        initial_energies,
        steps: records,
        converged,
        decay_rates,
    })
}

/// Sup distance between `a` and `b` relative to the mean radius of `b`, both moved by
/// the isotropic map of `b`.
pub fn isotropic_relative_distance(a: &StarBody, b: &StarBody) -> Result<f64> {
    let (b_iso, t) = isotropic_position(b)?;
    let a_iso = apply_linear(a, &t)?;
    let diff = a_iso.radial().sub(b_iso.radial())?;
    Ok(diff.sup_norm() / b_iso.mean_radius())
}

/// Ĉ_K: least-squares c in c·h_{Γ_pK} ≈ h_K, taken in isotropic position so that
/// Ĉ_{TK} = Ĉ_K for every linear T.
pub fn estimate_constant(body: &StarBody, p: f64) -> Result<f64> {
    let (iso, _) = isotropic_position(body)?;
    let h_gamma = centroid_body(&iso, p)?;
    let h_k = support_on_grid(&iso);
    least_squares_scale(&h_gamma, &h_k)
}

/// Outcome of [`constant_stability_check`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConstantStability {
    pub c_hat: f64,
    pub c_b: f64,
    /// Isotropic-normalized sup deviation used for the band.
    pub epsilon: f64,
    /// Bounds on C_B/Ĉ.
    pub lower: f64,
    pub upper: f64,
}

impl ConstantStability {
    pub fn ratio(&self) -> f64 {
        self.c_b / self.c_hat
    }
}

/// Checks ((1−ε)/(1+ε))^{n/p+1} ≤ C_B/Ĉ_K ≤ ((1+ε)/(1−ε))^{n/p+1}, with ε the
/// isotropic-normalized deviation of K from the ball.
pub fn constant_stability_check(body: &StarBody, p: f64) -> Result<ConstantStability> {
    let n = body.n() as f64;
    let epsilon = distance_to_ball(body)?.sup_deviation;
    if epsilon >= 1.0 {
        return Err(Error::TooFarFromBall(epsilon));
    }
    let c_hat = estimate_constant(body, p)?;
    let c_b = c_b_p(body.n(), p)?;
    let exponent = n / p + 1.0;
    let q = (1.0 + epsilon) / (1.0 - epsilon);
    // 1e-12 slack absorbs rounding when ε = 0
    let report = ConstantStability {
        c_hat,
        c_b,
        epsilon,
        lower: q.powf(-exponent) * (1.0 - 1e-12),
        upper: q.powf(exponent) * (1.0 + 1e-12),
    };
    let r = report.ratio();
    if !(report.lower..=report.upper).contains(&r) {
        return Err(Error::SandwichViolation {
            c_hat,
            lower: report.lower,
            upper: report.upper,
        });
    }
    Ok(report)
}

/// |Ĉ_{TK} − Ĉ_K|.
pub fn constant_drift_under(body: &StarBody, t: &LinearMap, p: f64) -> Result<f64> {
    let tk = apply_linear(body, t)?;
    Ok((estimate_constant(&tk, p)? - estimate_constant(body, p)?).abs())
}
