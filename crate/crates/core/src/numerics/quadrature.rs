//! Gauss–Jacobi rules on [-1, 1] for the weight (1-x)^a (1+x)^b.

use super::gamma::ln_gamma;
use crate::error::{Error, Result};

/// Nodes (ascending) and weights of an m-point Gauss rule.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Maps the rule from [-1, 1] to [lo, hi], scaling weights by the Jacobian only.
    pub fn affine(&self, lo: f64, hi: f64) -> GaussRule {
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        GaussRule {
            nodes: self.nodes.iter().map(|x| mid + half * x).collect(),
            weights: self.weights.iter().map(|w| w * half).collect(),
        }
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        let terms: Vec<f64> = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .collect();
        super::pairwise_sum(&terms)
    }
}

/// Jacobi polynomial P_m^{(a,b)}(x) together with P_{m-1}.
fn jacobi_pair(m: usize, a: f64, b: f64, x: f64) -> (f64, f64) {
    if m == 0 {
        return (1.0, 0.0);
    }
    let mut prev = 1.0;
    let mut cur = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * x;
    for n in 2..=m {
        let nf = n as f64;
        let s = 2.0 * nf + a + b;
        let c0 = 2.0 * nf * (nf + a + b) * (s - 2.0);
        let c1 = (s - 1.0) * (s * (s - 2.0) * x + a * a - b * b);
        let c2 = 2.0 * (nf + a - 1.0) * (nf + b - 1.0) * s;
        let next = (c1 * cur - c2 * prev) / c0;
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

/// d/dx P_m^{(a,b)}(x) for |x| < 1.
fn jacobi_derivative(m: usize, a: f64, b: f64, x: f64, pm: f64, pm1: f64) -> f64 {
    let mf = m as f64;
    let s = 2.0 * mf + a + b;
    (mf * ((a - b) - s * x) * pm + 2.0 * (mf + a) * (mf + b) * pm1) / (s * (1.0 - x * x))
}

/// Eigenvalues of a symmetric tridiagonal matrix by implicit QL with Wilkinson shifts.
/// `d` is the diagonal, `e[i]` couples rows i and i+1; both are overwritten.
fn tridiagonal_eigenvalues(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    const MAX_ITER: usize = 60;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_ITER {
                return Err(Error::EigenNoConvergence(MAX_ITER));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

/// m-point Gauss–Jacobi rule for the weight (1-x)^a (1+x)^b, a, b > -1.
///
/// Nodes come from the Golub–Welsch matrix and are polished by Newton steps on
/// the Jacobi recurrence; weights use the closed form in P_m'.
#[allow(clippy::needless_range_loop)]
pub fn gauss_jacobi(m: usize, a: f64, b: f64) -> Result<GaussRule> {
    if m == 0 {
        return Err(Error::InvalidArgument(
            "Gauss rule needs at least one node".into(),
        ));
    }
    if !(a > -1.0 && b > -1.0) {
        return Err(Error::InvalidArgument(format!(
            "Jacobi exponents must exceed -1, got ({a}, {b})"
        )));
    }
    let ab = a + b;
    let mut diag = Vec::with_capacity(m);
    let mut off = vec![0.0; m];
    for i in 0..m {
        let s = 2.0 * i as f64 + ab;
        let alpha = if i == 0 {
            (b - a) / (ab + 2.0)
        } else {
            (b * b - a * a) / (s * (s + 2.0))
        };
        diag.push(alpha);
        if i + 1 < m {
            let k = (i + 1) as f64;
            let s = 2.0 * k + ab;
            let num = 4.0 * k * (k + a) * (k + b) * (k + ab);
            let den = s * s * (s + 1.0) * (s - 1.0);
            off[i] = (num / den).sqrt();
        }
    }
    tridiagonal_eigenvalues(&mut diag, &mut off)?;
    diag.sort_by(|x, y| x.total_cmp(y));

    let ln_const = ln_gamma(m as f64 + a + 1.0)? + ln_gamma(m as f64 + b + 1.0)?
        - ln_gamma(m as f64 + ab + 1.0)?
        - ln_gamma(m as f64 + 1.0)?
        + (ab + 1.0) * std::f64::consts::LN_2;
    let scale = ln_const.exp();

    let mut nodes = Vec::with_capacity(m);
    let mut weights = Vec::with_capacity(m);
    for &x0 in &diag {
        let mut x = x0.clamp(-1.0 + 1e-300, 1.0 - 1e-300);
        let mut deriv = 0.0;
        for _ in 0..4 {
            let (pm, pm1) = jacobi_pair(m, a, b, x);
            deriv = jacobi_derivative(m, a, b, x, pm, pm1);
            let step = pm / deriv;
            x -= step;
            if step.abs() <= 4.0 * f64::EPSILON {
                let (pm, pm1) = jacobi_pair(m, a, b, x);
                deriv = jacobi_derivative(m, a, b, x, pm, pm1);
                break;
            }
        }
        nodes.push(x);
        weights.push(scale / ((1.0 - x * x) * deriv * deriv));
    }
    Ok(GaussRule { nodes, weights })
}

/// m-point Gauss–Legendre rule.
pub fn gauss_legendre(m: usize) -> Result<GaussRule> {
    gauss_jacobi(m, 0.0, 0.0)
}
