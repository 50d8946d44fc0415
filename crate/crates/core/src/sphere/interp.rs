//! Band-limited interpolation off the grid and Newton optimization on the sphere.

use super::frame::{normalize, orthonormal_complement};
use super::function::SphereFunction;
use super::kernel::{multiplier_kernel, Folded};
use crate::error::{Error, Result};
use crate::numerics::{cholesky_solve, dot};

/// Value, Euclidean gradient and row-major Hessian of a function on R^n.
#[derive(Debug, Clone, PartialEq)]
pub struct Jet {
    pub value: f64,
    pub grad: Vec<f64>,
    pub hess: Vec<f64>,
}

/// Hyperinterpolant of a sampled function at band L: the degree-≤L projection,
/// evaluable at any unit vector together with derivatives of its zonal extension.
pub struct BandLimited {
    folded: Folded,
    coeffs: Vec<f64>,
}

impl BandLimited {
    pub fn new(f: &SphereFunction, band: usize) -> Result<Self> {
        let supported = f.grid().max_band();
        if band > supported {
            return Err(Error::BandLimit {
                requested: band,
                supported,
            });
        }
        let n = f.grid().n();
        Ok(Self {
            folded: Folded::new(f, band),
            coeffs: multiplier_kernel(n, &vec![1.0; band + 1]),
        })
    }

    /// Interpolant at the grid's full band.
    pub fn full_band(f: &SphereFunction) -> Self {
        Self::new(f, f.grid().max_band()).expect("band equals the grid band")
    }

    pub fn n(&self) -> usize {
        self.folded.n()
    }

    pub fn value(&self, x: &[f64]) -> f64 {
        let rec = self.folded.recurrence();
        let odd = self.folded.has_odd();
        let mut acc = 0.0;
        for j in 0..self.folded.len() {
            let t = dot(x, self.folded.node(j));
            let (e, o) = rec.split_sum(&self.coeffs, t, odd);
            acc += self.folded.plus(j) * e;
            if odd {
                acc += self.folded.minus(j) * o;
            }
        }
        acc
    }

    pub fn jet(&self, x: &[f64]) -> Jet {
        let n = self.n();
        let rec = self.folded.recurrence();
        let mut value = 0.0;
        let mut grad = vec![0.0; n];
        let mut hess = vec![0.0; n * n];
        for j in 0..self.folded.len() {
            let th = self.folded.node(j);
            let t = dot(x, th);
            let (e, o) = rec.split_sum_with_derivatives(&self.coeffs, t);
            let (p, m) = (self.folded.plus(j), self.folded.minus(j));
            value += p * e[0] + m * o[0];
            let d1 = p * e[1] + m * o[1];
            let d2 = p * e[2] + m * o[2];
            for a in 0..n {
                grad[a] += d1 * th[a];
                let s = d2 * th[a];
                for b in a..n {
                    hess[a * n + b] += s * th[b];
                }
            }
        }
        for a in 0..n {
            for b in 0..a {
                hess[a * n + b] = hess[b * n + a];
            }
        }
        Jet { value, grad, hess }
    }
}

/// Riemannian Newton ascent for F restricted to the unit sphere.
///
/// `f` returns the jet of an extension of F to a neighbourhood of the sphere.
/// Steps whose tangent Hessian is not negative definite fall back to
/// backtracking gradient ascent. Returns the maximizer and the maximum.
pub fn maximize_on_sphere<F>(f: F, start: &[f64], max_iter: usize) -> (Vec<f64>, f64)
where
    F: Fn(&[f64]) -> Jet,
{
    let n = start.len();
    let mut x = start.to_vec();
    normalize(&mut x);
    let mut jet = f(&x);
    for _ in 0..max_iter {
        let basis = orthonormal_complement(&x);
        let d = n - 1;
        let g: Vec<f64> = basis.iter().map(|b| dot(b, &jet.grad)).collect();
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm <= 1e-14 * jet.value.abs().max(1.0) {
            break;
        }
        let radial = dot(&x, &jet.grad);
        let mut neg_h = vec![0.0; d * d];
        for a in 0..d {
            let hb: Vec<f64> = (0..n)
                .map(|i| (0..n).map(|k| jet.hess[i * n + k] * basis[a][k]).sum())
                .collect();
            for b in 0..d {
                let v = dot(&basis[b], &hb) - if a == b { radial } else { 0.0 };
                neg_h[b * d + a] = -v;
            }
        }
        let scale = neg_h.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-12);
        let (s, newton) = match cholesky_solve(d, &neg_h, &g) {
            Some(s) => (s, true),
            None => (g.iter().map(|v| v / scale).collect::<Vec<_>>(), false),
        };
        let mut dir = vec![0.0; n];
        for (a, b) in basis.iter().enumerate() {
            for i in 0..n {
                dir[i] += s[a] * b[i];
            }
        }
        let len = dir.iter().map(|v| v * v).sum::<f64>().sqrt();
        // a Newton step this short changes the value below rounding
        if newton && len <= 1e-7 {
            break;
        }
        let mut step = if len > 0.5 { 0.5 / len } else { 1.0 };
        let mut accepted = false;
        for _ in 0..30 {
            let mut y: Vec<f64> = x.iter().zip(&dir).map(|(a, b)| a + step * b).collect();
            normalize(&mut y);
            let cand = f(&y);
            if cand.value >= jet.value - 1e-15 * jet.value.abs() {
                let gain = cand.value - jet.value;
                x = y;
                jet = cand;
                accepted = true;
                // gains at the level of summation noise end the search
                if gain.abs() <= 1e-14 * jet.value.abs().max(1.0) {
                    return (x, jet.value);
                }
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    (x, jet.value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sphere::grid::SphereGrid;
    use crate::sphere::harmonics::zonal_harmonic;
    use std::sync::Arc;

    #[test]
    fn interpolant_reproduces_band_limited_function() {
        let g = Arc::new(SphereGrid::build(3, 10).unwrap());
        let axis = [0.48, 0.6, 0.64];
        let y = zonal_harmonic(&g, 5, &axis).unwrap();
        let bl = BandLimited::full_band(&y.function);
        let x = [0.0, 0.6, 0.8];
        let t: f64 = dot(&axis, &x);
        let exact = crate::numerics::gegenbauer_normalized(5, 0.5, t);
        assert!((bl.value(&x) - exact).abs() < 1e-12);
    }

    #[test]
    fn jet_matches_finite_differences() {
        let g = Arc::new(SphereGrid::build(4, 8).unwrap());
        let f = SphereFunction::from_fn(g, |x| 1.0 + x[0] * x[1] + 0.3 * x[2].powi(3));
        let bl = BandLimited::full_band(&f);
        let x = [0.1, 0.2, 0.3, 0.9];
        let jet = bl.jet(&x);
        let h = 1e-6;
        for a in 0..4 {
            let mut xp = x;
            let mut xm = x;
            xp[a] += h;
            xm[a] -= h;
            let fd = (bl.value(&xp) - bl.value(&xm)) / (2.0 * h);
            assert!((fd - jet.grad[a]).abs() < 1e-6);
            let fdh = (bl.jet(&xp).grad[a] - bl.jet(&xm).grad[a]) / (2.0 * h);
            assert!((fdh - jet.hess[a * 4 + a]).abs() < 1e-5);
        }
    }

    #[test]
    fn newton_finds_maximum_of_linear_function() {
        let target = [0.36, 0.48, 0.8];
        let f = |x: &[f64]| Jet {
            value: dot(x, &target),
            grad: target.to_vec(),
            hess: vec![0.0; 9],
        };
        let (x, v) = maximize_on_sphere(f, &[1.0, 0.0, 0.1], 50);
        assert!((v - 1.0).abs() < 1e-14);
        for i in 0..3 {
            assert!((x[i] - target[i]).abs() < 1e-7);
        }
    }
}
