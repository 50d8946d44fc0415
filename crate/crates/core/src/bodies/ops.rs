use rayon::prelude::*;

use super::body::{LinearMap, StarBody};
use crate::error::{Error, Result};
use crate::numerics::{dot, SymmetricMatrix};
use crate::sphere::{maximize_on_sphere, BandLimited, Jet, SphereFunction};
use crate::transforms::{as_multiplier, p_cosine_transform, radon_transform, OperatorName};

const NEWTON_ITERATIONS: usize = 30;

/// Support function evaluator: maximizes ρ(θ)(φ·θ) over the band-limited interpolant of ρ,
/// starting from the best grid node.
pub struct SupportEvaluator<'a> {
    body: &'a StarBody,
    interp: BandLimited,
}

impl<'a> SupportEvaluator<'a> {
    pub fn new(body: &'a StarBody) -> Self {
        Self {
            body,
            interp: BandLimited::full_band(body.radial()),
        }
    }

    pub fn at(&self, phi: &[f64]) -> f64 {
        let g = self.body.grid();
        let rho = self.body.radial().values();
        let start = (0..g.len())
            .max_by(|&a, &b| {
                let fa = rho[a] * dot(phi, g.point(a));
                let fb = rho[b] * dot(phi, g.point(b));
                fa.total_cmp(&fb).then(b.cmp(&a))
            })
            .expect("grid is non-empty");
        let n = g.n();
        let objective = |x: &[f64]| {
            let r = self.interp.jet(x);
            let s = dot(phi, x);
            let mut grad = vec![0.0; n];
            let mut hess = vec![0.0; n * n];
            for a in 0..n {
                grad[a] = r.grad[a] * s + r.value * phi[a];
                for b in 0..n {
                    hess[a * n + b] =
                        r.hess[a * n + b] * s + r.grad[a] * phi[b] + phi[a] * r.grad[b];
                }
            }
            Jet {
                value: r.value * s,
                grad,
                hess,
            }
        };
        let (_, best) = maximize_on_sphere(objective, g.point(start), NEWTON_ITERATIONS);
        best.max(rho[start] * dot(phi, g.point(start)))
    }
}

/// h_K(φ) = max_θ ρ_K(θ)(φ·θ).
pub fn support_function(body: &StarBody, phi: &[f64]) -> f64 {
    SupportEvaluator::new(body).at(phi)
}

/// h_K sampled on the body's own grid.
pub fn support_on_grid(body: &StarBody) -> SphereFunction {
    let eval = SupportEvaluator::new(body);
    let g = body.grid().clone();
    let values: Vec<f64> = (0..g.len())
        .into_par_iter()
        .map(|i| eval.at(g.point(i)))
        .collect();
    SphereFunction::new(g, values).expect("support values are finite")
}

/// Radial function of the Wulff shape {x : x·φ ≤ h(φ) ∀φ}:
/// ρ(θ) = min_{φ·θ>0} h(φ)/(φ·θ), minimized over the band-limited interpolant of h.
pub fn radial_from_support(h: &SphereFunction) -> Result<SphereFunction> {
    if let Some((index, &value)) = h.values().iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
        return Err(Error::Nonpositive { value, index });
    }
    let g = h.grid().clone();
    let n = g.n();
    let interp = BandLimited::full_band(h);
    let hv = h.values();
    let values: Vec<f64> = (0..g.len())
        .into_par_iter()
        .map(|i| {
            let theta = g.point(i);
            let start = (0..g.len())
                .filter(|&j| dot(theta, g.point(j)) > 0.5)
                .min_by(|&a, &b| {
                    let fa = hv[a] / dot(theta, g.point(a));
                    let fb = hv[b] / dot(theta, g.point(b));
                    fa.total_cmp(&fb).then(a.cmp(&b))
                })
                .unwrap_or(i);
            let grid_best = hv[start] / dot(theta, g.point(start));
            let objective = |x: &[f64]| {
                let r = interp.jet(x);
                let s = dot(theta, x);
                if s <= 1e-3 {
                    return Jet {
                        value: f64::NEG_INFINITY,
                        grad: vec![0.0; n],
                        hess: vec![0.0; n * n],
                    };
                }
                let (s2, s3) = (s * s, s * s * s);
                let mut grad = vec![0.0; n];
                let mut hess = vec![0.0; n * n];
                for a in 0..n {
                    grad[a] = -(r.grad[a] / s - r.value * theta[a] / s2);
                    for b in 0..n {
                        let v = r.hess[a * n + b] / s
                            - (r.grad[a] * theta[b] + theta[a] * r.grad[b]) / s2
                            + 2.0 * r.value * theta[a] * theta[b] / s3;
                        hess[a * n + b] = -v;
                    }
                }
                Jet {
                    value: -r.value / s,
                    grad,
                    hess,
                }
            };
            let (_, neg) = maximize_on_sphere(objective, g.point(start), NEWTON_ITERATIONS);
            (-neg).min(grid_best)
        })
        .collect();
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
        return Err(Error::Nonpositive { value, index });
    }
    SphereFunction::new(g, values)
}

/// Polar body: ρ_{K*} = 1/h_K.
pub fn polar(body: &StarBody) -> Result<StarBody> {
    StarBody::new(support_on_grid(body).map(f64::recip))
}

/// h_{Γ_p K} = [C^p ρ^{n+p} / ((n+p) vol K)]^{1/p}, with multipliers from quadrature.
pub fn centroid_body(body: &StarBody, p: f64) -> Result<SphereFunction> {
    let n = body.n() as f64;
    let lifted = body.radial().powf(n + p);
    let c = p_cosine_transform(&lifted, p)?;
    let denom = (n + p) * body.volume();
    finish_centroid(c, denom, p)
}

/// h_{ΓK} = C ρ^{n+1} / ((n+1) vol K), with the closed-form cosine multipliers.
pub fn centroid_body_closed_form(body: &StarBody) -> Result<SphereFunction> {
    let n = body.n();
    let lifted = body.radial().powf(n as f64 + 1.0);
    let op = as_multiplier(OperatorName::Cosine, n, body.grid().max_band())?;
    let c = op.apply(&lifted)?;
    finish_centroid(c, (n as f64 + 1.0) * body.volume(), 1.0)
}

fn finish_centroid(c: SphereFunction, denom: f64, p: f64) -> Result<SphereFunction> {
    if let Some((index, &value)) = c.values().iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
        return Err(Error::Nonpositive { value, index });
    }
    Ok(c.map(|v| (v / denom).powf(1.0 / p)))
}

/// ρ_{IK} = (1/(n−1)) R ρ^{n−1}.
pub fn intersection_body(body: &StarBody) -> Result<StarBody> {
    let n = body.n() as f64;
    let r = radon_transform(&body.radial().powf(n - 1.0))?;
    StarBody::new(r.scale(1.0 / (n - 1.0)))
}

/// h_{I*K} = (n−1) / R ρ^{n−1}.
pub fn polar_intersection_body(body: &StarBody) -> Result<SphereFunction> {
    let n = body.n() as f64;
    let r = radon_transform(&body.radial().powf(n - 1.0))?;
    if let Some((index, &value)) = r.values().iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
        return Err(Error::Nonpositive { value, index });
    }
    Ok(r.map(|v| (n - 1.0) / v))
}

/// TK resampled on the grid of K: ρ_{TK}(θ) = ρ_K(u)/|T⁻¹θ| with u = T⁻¹θ/|T⁻¹θ|,
/// ρ_K(u) taken from the band-limited interpolant.
pub fn apply_linear(body: &StarBody, t: &LinearMap) -> Result<StarBody> {
    let g = body.grid().clone();
    if t.n() != g.n() {
        return Err(Error::InvalidArgument(format!(
            "map acts on R^{} but the body lives in R^{}",
            t.n(),
            g.n()
        )));
    }
    let interp = BandLimited::full_band(body.radial());
    let values: Vec<f64> = (0..g.len())
        .into_par_iter()
        .map(|i| {
            let mut u = t.apply_inverse(g.point(i));
            let len = crate::sphere::frame::normalize(&mut u);
            interp.value(&u) / len
        })
        .collect();
    StarBody::new(SphereFunction::new(g, values)?)
}

/// M_ij = ∫_K x_i x_j dx = (1/(n+2)) ∫ ρ^{n+2} θ_i θ_j dσ.
pub fn legendre_matrix(body: &StarBody) -> Result<SymmetricMatrix> {
    let n = body.n();
    let g = body.grid();
    let lifted = body.radial().powf(n as f64 + 2.0);
    let scale = 1.0 / (n as f64 + 2.0);
    SymmetricMatrix::from_fn(n, |i, j| {
        let f = SphereFunction::new(
            g.clone(),
            lifted
                .values()
                .iter()
                .zip(g.points())
                .map(|(r, x)| r * x[i] * x[j])
                .collect(),
        )
        .expect("finite products");
        scale * f.integrate()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::BodySpec;
    use crate::sphere::SphereGrid;
    use std::f64::consts::PI;
    use std::sync::Arc;

    fn grid(m: usize) -> Arc<SphereGrid> {
        Arc::new(SphereGrid::build(3, m).unwrap())
    }

    fn ellipsoid(g: &Arc<SphereGrid>, axes: &[f64]) -> StarBody {
        StarBody::from_spec(
            g.clone(),
            &BodySpec::Ellipsoid {
                axes: axes.to_vec(),
            },
        )
        .unwrap()
    }

    #[test]
    fn support_of_ball() {
        let b = StarBody::ball(grid(12), 1.0).unwrap();
        assert!((support_function(&b, &[0.6, 0.0, 0.8]) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn support_of_ellipsoid() {
        let g = grid(32);
        let e = ellipsoid(&g, &[2.0, 0.5, 0.5]);
        let phi = [1.0 / 2f64.sqrt(), 1.0 / 2f64.sqrt(), 0.0];
        // |Aφ| for A = diag(2, 0.5, 0.5)
        let exact = (4.25f64 / 2.0).sqrt();
        assert!((support_function(&e, &phi) - exact).abs() < 1e-4);
        let e = ellipsoid(&g, &[1.1, 1.0, 0.9]);
        assert!((support_function(&e, &[1.0, 0.0, 0.0]) - 1.1).abs() < 1e-9);
    }

    #[test]
    fn radial_from_constant_support() {
        let g = grid(10);
        let h = SphereFunction::constant(g, 1.7);
        let r = radial_from_support(&h).unwrap();
        for v in r.values() {
            assert!((v - 1.7).abs() < 1e-12);
        }
    }

    #[test]
    fn radial_from_ellipsoid_support() {
        let g = grid(24);
        let axes = [1.1, 1.0, 0.9];
        let h = SphereFunction::from_fn(g.clone(), |x| {
            x.iter()
                .zip(&axes)
                .map(|(t, a)| (t * a).powi(2))
                .sum::<f64>()
                .sqrt()
        });
        let r = radial_from_support(&h).unwrap();
        for (x, v) in g.points().zip(r.values()) {
            let exact = x
                .iter()
                .zip(&axes)
                .map(|(t, a)| (t / a).powi(2))
                .sum::<f64>()
                .sqrt()
                .recip();
            assert!((v - exact).abs() < 1e-6);
        }
    }

    #[test]
    fn centroid_of_unit_ball() {
        let b = StarBody::ball(grid(8), 1.0).unwrap();
        let h = centroid_body(&b, 1.0).unwrap();
        for v in h.values() {
            assert!((v - 3.0 / 8.0).abs() < 1e-12);
        }
        let h2 = centroid_body_closed_form(&b).unwrap();
        assert!(h.sub(&h2).unwrap().sup_norm() < 1e-12);
    }

    #[test]
    fn intersection_of_ball() {
        let g = grid(8);
        let b = StarBody::ball(g.clone(), 1.0).unwrap();
        let ib = intersection_body(&b).unwrap();
        assert!((ib.radial().values()[3] - PI).abs() < 1e-12);
        let b2 = StarBody::ball(g, 2.0).unwrap();
        assert!((intersection_body(&b2).unwrap().radial().values()[0] - 4.0 * PI).abs() < 1e-11);
        let h = polar_intersection_body(&b).unwrap();
        assert!((h.values()[0] - 1.0 / PI).abs() < 1e-13);
    }

    #[test]
    fn polar_of_ellipsoid() {
        let g = grid(32);
        let e = ellipsoid(&g, &[2.0, 1.0, 1.0]);
        let p = polar(&e).unwrap();
        for (x, v) in g.points().zip(p.radial().values()) {
            let exact = ((2.0 * x[0]).powi(2) + x[1].powi(2) + x[2].powi(2))
                .sqrt()
                .recip();
            assert!((v - exact).abs() < 1e-6);
        }
    }

    #[test]
    fn linear_image_of_ball() {
        let g = grid(16);
        let b = StarBody::ball(g.clone(), 1.0).unwrap();
        let t = LinearMap::diagonal(&[2.0, 1.0, 1.0]).unwrap();
        let e = apply_linear(&b, &t).unwrap();
        let target = ellipsoid(&g, &[2.0, 1.0, 1.0]);
        assert!(e.radial().sub(target.radial()).unwrap().sup_norm() < 1e-12);
        let same = apply_linear(&b, &LinearMap::identity(3)).unwrap();
        assert!(same.radial().sub(b.radial()).unwrap().sup_norm() < 1e-13);
    }

    #[test]
    fn linear_image_error_shrinks_under_refinement() {
        let axes = [1.1, 1.0, 0.9];
        let t = LinearMap::new(3, vec![1.0, 0.2, 0.0, 0.0, 1.0, 0.1, 0.05, 0.0, 1.0]).unwrap();
        let error = |m: usize| {
            let g = grid(m);
            let tk = apply_linear(&ellipsoid(&g, &axes), &t).unwrap();
            // ρ_{TK}(x) = 1/‖D⁻¹T⁻¹x‖ for K = D·B
            g.points()
                .zip(tk.radial().values())
                .map(|(x, v)| {
                    let y = t.apply_inverse(x);
                    let q: f64 = y.iter().zip(&axes).map(|(c, a)| (c / a).powi(2)).sum();
                    (v - q.sqrt().recip()).abs()
                })
                .fold(0.0, f64::max)
        };
        let (coarse, fine) = (error(8), error(16));
        assert!(fine < 0.1 * coarse, "{coarse} {fine}");
        assert!(fine < 1e-5);
    }

    #[test]
    fn volume_scales_with_determinant() {
        let g = grid(32);
        let k = ellipsoid(&g, &[1.1, 1.0, 0.95]);
        let t = LinearMap::diagonal(&[1.3, 0.9, 1.1]).unwrap();
        let tk = apply_linear(&k, &t).unwrap();
        assert!((tk.volume() / k.volume() - 1.287).abs() < 1e-4 * 1.287);
    }

    #[test]
    fn legendre_matrix_of_ball_and_ellipsoid() {
        let g = grid(16);
        let m = legendre_matrix(&StarBody::ball(g.clone(), 1.0).unwrap()).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let target = if i == j { 4.0 * PI / 15.0 } else { 0.0 };
                assert!((m.get(i, j) - target).abs() < 1e-12);
            }
        }
        let (a, b, c) = (1.1, 1.0, 0.9);
        let m = legendre_matrix(&ellipsoid(&grid(32), &[a, b, c])).unwrap();
        // ∫_E x_i² dx = κ₃ abc a_i² / 5
        let base = 4.0 * PI / 15.0 * a * b * c;
        for (i, ai) in [a, b, c].iter().enumerate() {
            assert!((m.get(i, i) - base * ai * ai).abs() < 1e-9);
        }
    }
}
