//! Zonal-kernel quadrature: out(x) = Σ_i w_i f_i K(x·θ_i) with K = Σ_k a_k G_k.
//!
//! Antipodal pairs are folded so each pair costs one recurrence: with
//! f± = f(θ) ± f(−θ), even degrees see f⁺ and odd degrees see f⁻.

use rayon::prelude::*;

use super::function::SphereFunction;
use crate::numerics::{dot, pairwise_sum, sphere_measure, ZonalRecurrence};

/// dim H_k^n = C(n+k−1, k) − C(n+k−3, k−2).
pub fn harmonic_dim(n: usize, k: usize) -> usize {
    fn binom(a: i64, b: i64) -> u128 {
        if b < 0 || a < b {
            return 0;
        }
        let b = b.min(a - b);
        let mut r: u128 = 1;
        for i in 0..b {
            r = r * (a - i) as u128 / (i + 1) as u128;
        }
        r
    }
    let (n, k) = (n as i64, k as i64);
    (binom(n + k - 1, k) - binom(n + k - 3, k - 2)) as usize
}

/// Turns per-degree multipliers c_k into kernel coefficients c_k dim_k / σ_{n-1},
/// so that the kernel acts on degree-k harmonics by c_k.
pub fn multiplier_kernel(n: usize, multipliers: &[f64]) -> Vec<f64> {
    let sigma = sphere_measure(n);
    multipliers
        .iter()
        .enumerate()
        .map(|(k, c)| c * harmonic_dim(n, k) as f64 / sigma)
        .collect()
}

/// Folded quadrature data of one sampled function.
pub(crate) struct Folded {
    n: usize,
    nodes: Vec<f64>,
    plus: Vec<f64>,
    minus: Vec<f64>,
    has_odd: bool,
    rec: ZonalRecurrence,
}

impl Folded {
    pub fn new(f: &SphereFunction, max_degree: usize) -> Self {
        let g = f.grid();
        let n = g.n();
        let half = g.half();
        let mut nodes = Vec::with_capacity(half.len() * n);
        let mut plus = Vec::with_capacity(half.len());
        let mut minus = Vec::with_capacity(half.len());
        let v = f.values();
        for &i in half {
            nodes.extend_from_slice(g.point(i));
            let a = g.antipode(i);
            let w = g.weights()[i];
            plus.push(w * (v[i] + v[a]));
            minus.push(w * (v[i] - v[a]));
        }
        let has_odd = minus.iter().any(|&m| m != 0.0);
        Self {
            n,
            nodes,
            plus,
            minus,
            has_odd,
            rec: ZonalRecurrence::for_dimension(n, max_degree),
        }
    }

    pub fn len(&self) -> usize {
        self.plus.len()
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_odd(&self) -> bool {
        self.has_odd
    }

    #[inline]
    pub fn node(&self, j: usize) -> &[f64] {
        &self.nodes[j * self.n..(j + 1) * self.n]
    }

    #[inline]
    pub fn plus(&self, j: usize) -> f64 {
        self.plus[j]
    }

    #[inline]
    pub fn minus(&self, j: usize) -> f64 {
        self.minus[j]
    }

    pub fn recurrence(&self) -> &ZonalRecurrence {
        &self.rec
    }

    /// (even part, odd part) of the kernel sum at x; the value at −x is their difference.
    pub fn eval_split(&self, x: &[f64], a: &[f64], scratch: &mut Scratch) -> (f64, f64) {
        scratch.even.clear();
        scratch.odd.clear();
        for j in 0..self.len() {
            let t = dot(x, self.node(j));
            let (e, o) = self.rec.split_sum(a, t, self.has_odd);
            scratch.even.push(self.plus[j] * e);
            if self.has_odd {
                scratch.odd.push(self.minus[j] * o);
            }
        }
        (pairwise_sum(&scratch.even), pairwise_sum(&scratch.odd))
    }
}

#[derive(Default)]
pub(crate) struct Scratch {
    even: Vec<f64>,
    odd: Vec<f64>,
}

/// Applies the zonal kernel with coefficients `a` (see [`multiplier_kernel`]) to `f`,
/// producing values on the grid of `f`.
pub fn apply_kernel(f: &SphereFunction, a: &[f64]) -> SphereFunction {
    let g = f.grid().clone();
    let folded = Folded::new(f, a.len().saturating_sub(1));
    let half = g.half();
    let pairs: Vec<(f64, f64)> = half
        .par_iter()
        .map_init(Scratch::default, |scratch, &i| {
            folded.eval_split(g.point(i), a, scratch)
        })
        .collect();
    let mut out = vec![0.0; g.len()];
    for (&i, (e, o)) in half.iter().zip(pairs) {
        out[i] = e + o;
        out[g.antipode(i)] = e - o;
    }
    SphereFunction::from_parts(g, out)
}

/// Evaluates the kernel sum of `f` at arbitrary unit vectors.
pub fn evaluate_kernel(f: &SphereFunction, a: &[f64], points: &[Vec<f64>]) -> Vec<f64> {
    let folded = Folded::new(f, a.len().saturating_sub(1));
    points
        .par_iter()
        .map_init(Scratch::default, |scratch, x| {
            let (e, o) = folded.eval_split(x, a, scratch);
            e + o
        })
        .collect()
}

/// All projections P_0 f, ..., P_L f in one pass over the grid.
pub fn project_all(f: &SphereFunction, max_degree: usize) -> Vec<SphereFunction> {
    let g = f.grid().clone();
    let n = g.n();
    let folded = Folded::new(f, max_degree);
    let scale = multiplier_kernel(n, &vec![1.0; max_degree + 1]);
    let half = g.half();
    let rows: Vec<Vec<f64>> = half
        .par_iter()
        .map_init(
            || {
                (
                    vec![Vec::with_capacity(folded.len()); max_degree + 1],
                    vec![0.0; max_degree + 1],
                )
            },
            |(terms, gk), &i| {
                for t in terms.iter_mut() {
                    t.clear();
                }
                let x = g.point(i);
                for j in 0..folded.len() {
                    let t = dot(x, folded.node(j));
                    folded.recurrence().fill(t, gk);
                    for (k, terms_k) in terms.iter_mut().enumerate() {
                        let c = if k % 2 == 0 {
                            folded.plus(j)
                        } else {
                            folded.minus(j)
                        };
                        terms_k.push(c * gk[k]);
                    }
                }
                terms
                    .iter()
                    .zip(&scale)
                    .map(|(t, s)| s * pairwise_sum(t))
                    .collect()
            },
        )
        .collect();
    (0..=max_degree)
        .map(|k| {
            let mut out = vec![0.0; g.len()];
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            for (&i, row) in half.iter().zip(&rows) {
                out[i] = row[k];
                out[g.antipode(i)] = sign * row[k];
            }
            SphereFunction::from_parts(g.clone(), out)
        })
        .collect()
}
