//! Gegenbauer polynomials and zonal sums of them.

/// Unnormalized Gegenbauer polynomial C_k^lambda(t) by the three-term recurrence
/// (k+1) C_{k+1} = 2(k+lambda) t C_k - (k+2 lambda-1) C_{k-1}.
pub fn gegenbauer(k: usize, lambda: f64, t: f64) -> f64 {
    if k == 0 {
        return 1.0;
    }
    let mut prev = 1.0;
    let mut cur = 2.0 * lambda * t;
    for j in 1..k {
        let jf = j as f64;
        let next = (2.0 * (jf + lambda) * t * cur - (jf + 2.0 * lambda - 1.0) * prev) / (jf + 1.0);
        prev = cur;
        cur = next;
    }
    cur
}

/// Gegenbauer polynomial scaled so that G_k(1) = 1. With lambda = (n-2)/2
/// this is the zonal profile of degree-k spherical harmonics on S^{n-1}.
pub fn gegenbauer_normalized(k: usize, lambda: f64, t: f64) -> f64 {
    ZonalRecurrence::new(lambda, k).values(t)[k]
}

/// Precomputed coefficients of the normalized recurrence
/// (k + 2 lambda) G_{k+1} = 2(k + lambda) t G_k - k G_{k-1}.
#[derive(Debug, Clone)]
pub struct ZonalRecurrence {
    lambda: f64,
    a: Vec<f64>,
    b: Vec<f64>,
}

impl ZonalRecurrence {
    pub fn new(lambda: f64, max_degree: usize) -> Self {
        let mut a = Vec::with_capacity(max_degree);
        let mut b = Vec::with_capacity(max_degree);
        for k in 0..max_degree {
            let kf = k as f64;
            let denom = kf + 2.0 * lambda;
            a.push(2.0 * (kf + lambda) / denom);
            b.push(kf / denom);
        }
        Self { lambda, a, b }
    }

    /// Lambda for the sphere S^{n-1}.
    pub fn for_dimension(n: usize, max_degree: usize) -> Self {
        Self::new((n as f64 - 2.0) / 2.0, max_degree)
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn max_degree(&self) -> usize {
        self.a.len()
    }

    /// G_0(t), ..., G_L(t).
    pub fn values(&self, t: f64) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.a.len() + 1);
        out.push(1.0);
        if self.a.is_empty() {
            return out;
        }
        out.push(t);
        for k in 1..self.a.len() {
            let next = self.a[k] * t * out[k] - self.b[k] * out[k - 1];
            out.push(next);
        }
        out
    }

    /// G_{k+1}(t) from G_k = `cur` and G_{k-1} = `prev`, k ≥ 1.
    #[inline]
    pub fn step(&self, k: usize, t: f64, cur: f64, prev: f64) -> f64 {
        self.a[k] * t * cur - self.b[k] * prev
    }

    /// Writes G_0(t), ..., G_{out.len()-1}(t) into `out`.
    #[inline]
    pub fn fill(&self, t: f64, out: &mut [f64]) {
        if out.is_empty() {
            return;
        }
        out[0] = 1.0;
        if out.len() == 1 {
            return;
        }
        out[1] = t;
        for k in 1..out.len() - 1 {
            out[k + 1] = self.a[k] * t * out[k] - self.b[k] * out[k - 1];
        }
    }

    /// Even-degree and odd-degree parts of sum_k coeffs[k] G_k(t).
    #[inline]
    pub fn split_sum(&self, coeffs: &[f64], t: f64, want_odd: bool) -> (f64, f64) {
        let mut even = coeffs[0];
        let mut odd = 0.0;
        if coeffs.len() == 1 {
            return (even, odd);
        }
        let mut prev = 1.0;
        let mut cur = t;
        odd += coeffs[1] * cur;
        for k in 1..coeffs.len() - 1 {
            let next = self.a[k] * t * cur - self.b[k] * prev;
            prev = cur;
            cur = next;
            if k % 2 == 1 {
                even += coeffs[k + 1] * cur;
            } else if want_odd {
                odd += coeffs[k + 1] * cur;
            }
        }
        (even, odd)
    }

    /// Like [`split_sum`](Self::split_sum) with first and second derivatives:
    /// returns ([even, even', even''], [odd, odd', odd'']).
    #[inline]
    pub fn split_sum_with_derivatives(&self, coeffs: &[f64], t: f64) -> ([f64; 3], [f64; 3]) {
        let mut even = [coeffs[0], 0.0, 0.0];
        let mut odd = [0.0; 3];
        if coeffs.len() == 1 {
            return (even, odd);
        }
        let (mut g0, mut g1) = (1.0, t);
        let (mut d0, mut d1) = (0.0, 1.0);
        let (mut s0, mut s1) = (0.0, 0.0);
        odd[0] += coeffs[1] * g1;
        odd[1] += coeffs[1];
        for k in 1..coeffs.len() - 1 {
            let (a, b) = (self.a[k], self.b[k]);
            let g2 = a * t * g1 - b * g0;
            let d2 = a * (g1 + t * d1) - b * d0;
            let s2 = a * (2.0 * d1 + t * s1) - b * s0;
            let c = coeffs[k + 1];
            let acc = if k % 2 == 1 { &mut even } else { &mut odd };
            acc[0] += c * g2;
            acc[1] += c * d2;
            acc[2] += c * s2;
            g0 = g1;
            g1 = g2;
            d0 = d1;
            d1 = d2;
            s0 = s1;
            s1 = s2;
        }
        (even, odd)
    }

    /// sum_k coeffs[k] G_k(t); `coeffs` may be shorter than max_degree + 1.
    #[inline]
    pub fn sum(&self, coeffs: &[f64], t: f64) -> f64 {
        let mut acc = coeffs[0];
        if coeffs.len() == 1 {
            return acc;
        }
        let mut prev = 1.0;
        let mut cur = t;
        acc += coeffs[1] * cur;
        for k in 1..coeffs.len() - 1 {
            let next = self.a[k] * t * cur - self.b[k] * prev;
            prev = cur;
            cur = next;
            acc += coeffs[k + 1] * cur;
        }
        acc
    }

    /// Value, first and second derivative of sum_k coeffs[k] G_k(t).
    #[inline]
    pub fn sum_with_derivatives(&self, coeffs: &[f64], t: f64) -> (f64, f64, f64) {
        let mut v = coeffs[0];
        if coeffs.len() == 1 {
            return (v, 0.0, 0.0);
        }
        let (mut g0, mut g1) = (1.0, t);
        let (mut d0, mut d1) = (0.0, 1.0);
        let (mut s0, mut s1) = (0.0, 0.0);
        v += coeffs[1] * g1;
        let mut dv = coeffs[1];
        let mut sv = 0.0;
        for k in 1..coeffs.len() - 1 {
            let (a, b) = (self.a[k], self.b[k]);
            let g2 = a * t * g1 - b * g0;
            let d2 = a * (g1 + t * d1) - b * d0;
            let s2 = a * (2.0 * d1 + t * s1) - b * s0;
            let c = coeffs[k + 1];
            v += c * g2;
            dv += c * d2;
            sv += c * s2;
            g0 = g1;
            g1 = g2;
            d0 = d1;
            d1 = d2;
            s0 = s1;
            s1 = s2;
        }
        (v, dv, sv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_zero_is_one() {
        for lambda in [0.5, 1.0, 2.5] {
            assert_eq!(gegenbauer(0, lambda, 0.3), 1.0);
        }
    }

    #[test]
    fn legendre_p2_at_zero() {
        assert!((gegenbauer(2, 0.5, 0.0) + 0.5).abs() < 1e-15);
    }

    #[test]
    fn degree_one_is_two_lambda_t() {
        assert!((gegenbauer(1, 1.0, 0.3) - 0.6).abs() < 1e-15);
    }

    #[test]
    fn normalized_is_unit_at_one() {
        for lambda in [0.5, 1.0, 1.5, 2.0] {
            for k in 0..20 {
                assert!((gegenbauer_normalized(k, lambda, 1.0) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn normalized_matches_unnormalized_ratio() {
        for lambda in [0.5, 1.0, 1.5] {
            for k in 0..12 {
                let t = 0.37;
                let ratio = gegenbauer(k, lambda, t) / gegenbauer(k, lambda, 1.0);
                assert!((gegenbauer_normalized(k, lambda, t) - ratio).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let rec = ZonalRecurrence::new(1.5, 10);
        let coeffs: Vec<f64> = (0..=10).map(|k| 1.0 / (k as f64 + 1.0)).collect();
        let t = 0.41;
        let h = 1e-5;
        let (_, d, s) = rec.sum_with_derivatives(&coeffs, t);
        let fd1 = (rec.sum(&coeffs, t + h) - rec.sum(&coeffs, t - h)) / (2.0 * h);
        let fd2 = (rec.sum(&coeffs, t + h) - 2.0 * rec.sum(&coeffs, t) + rec.sum(&coeffs, t - h))
            / (h * h);
        assert!((d - fd1).abs() < 1e-7);
        assert!((s - fd2).abs() < 1e-4);
    }
}
