//! Closed-form eigenvalues of the cosine, p-cosine and Radon transforms on H_k^n.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{ball_volume, gamma_fn, ln_double_factorial, sphere_measure};

fn check_dimension(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!(
            "dimension must be >= 3, got {n}"
        )));
    }
    Ok(())
}

fn check_p(p: f64) -> Result<()> {
    if !(p >= 1.0 && p.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "p must be a finite value >= 1, got {p}"
        )));
    }
    Ok(())
}

/// True when p is an even integer.
pub fn is_even_integer(p: f64) -> bool {
    p == p.round() && (p as i64) % 2 == 0
}

/// μ_{n,k}: eigenvalue of the (raw) cosine transform on H_k^n.
pub fn eigenvalue_cosine(n: usize, k: usize) -> Result<f64> {
    check_dimension(n)?;
    let base = 2.0 * ball_volume(n - 1);
    if k == 0 {
        return Ok(base);
    }
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let (k, n) = (k as i64, n as i64);
    let ln_ratio =
        ln_double_factorial(k - 3)? + ln_double_factorial(n - 1)? - ln_double_factorial(k + n - 1)?;
    let sign = if ((k - 2) / 2) % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * base * ln_ratio.exp())
}

/// Γ((k−p)/2)/Γ(−p/2) as the finite product Π_{i<k/2} (i − p/2); valid for every p,
/// and zero for even integer p < k.
fn gamma_ratio_product(k: usize, p: f64) -> f64 {
    (0..k / 2).map(|i| i as f64 - p / 2.0).product()
}

/// Γ((k−p)/2)/Γ(−p/2) through the Gamma function; fails at the poles of even integer p.
pub fn gamma_ratio_direct(k: usize, p: f64) -> Result<f64> {
    Ok(gamma_fn((k as f64 - p) / 2.0)? / gamma_fn(-p / 2.0)?)
}

/// m_{p,k}: eigenvalue of the p-cosine transform in the normalized measure dσ/σ_{n-1}.
///
/// Evaluated through the finite-product form of the Gamma ratio, which is the
/// analytic continuation across even integer p (where m_{p,k} = 0 for k > p).
pub fn eigenvalue_p_cosine(n: usize, k: usize, p: f64) -> Result<f64> {
    check_dimension(n)?;
    check_p(p)?;
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let prefactor = 2.0 * PI.powf((nf - 1.0) / 2.0) / sphere_measure(n);
    let base = prefactor * gamma_fn((p + 1.0) / 2.0)? / gamma_fn((nf + p) / 2.0)?;
    // Γ((k+n+p)/2) = Γ((n+p)/2) Π_{i<k/2} ((n+p)/2 + i)
    let mut value = base;
    for i in 0..k / 2 {
        value *= (i as f64 - p / 2.0) / ((nf + p) / 2.0 + i as f64);
    }
    let sign = if (k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * value)
}

/// m_{p,k} through Gamma functions directly; only for p not an even integer.
pub fn eigenvalue_p_cosine_gamma(n: usize, k: usize, p: f64) -> Result<f64> {
    check_dimension(n)?;
    check_p(p)?;
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let nf = n as f64;
    let kf = k as f64;
    let sign = if (k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let prefactor = 2.0 * sign * PI.powf((nf - 1.0) / 2.0) / sphere_measure(n);
    let ratio = if is_even_integer(p) {
        gamma_ratio_product(k, p)
    } else {
        gamma_ratio_direct(k, p)?
    };
    Ok(prefactor * ratio * gamma_fn((p + 1.0) / 2.0)? / gamma_fn((kf + nf + p) / 2.0)?)
}

/// Raw p-cosine eigenvalue m_{p,k} σ_{n-1}.
pub fn eigenvalue_p_cosine_raw(n: usize, k: usize, p: f64) -> Result<f64> {
    Ok(eigenvalue_p_cosine(n, k, p)? * sphere_measure(n))
}

/// Raw spherical Radon eigenvalue ω (−1)^{k/2} (k−1)!!(n−3)!!/(n+k−3)!! with ω = |S^{n-2}|.
pub fn eigenvalue_radon(n: usize, k: usize) -> Result<f64> {
    check_dimension(n)?;
    if k % 2 == 1 {
        return Ok(0.0);
    }
    let omega = sphere_measure(n - 1);
    let (ki, ni) = (k as i64, n as i64);
    let ln_ratio = ln_double_factorial(ki - 1)? + ln_double_factorial(ni - 3)?
        - ln_double_factorial(ni + ki - 3)?;
    let sign = if (k / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    Ok(sign * omega * ln_ratio.exp())
}

/// Which transform a table describes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TransformKind {
    Cosine,
    PCosine { p: f64 },
    Radon,
}

/// Eigenvalues for degrees 0..=L in the raw convention, with the conversion to the
/// convention in which the operator maps 1 to 1.
#[derive(Debug, Clone, Serialize)]
pub struct EigenvalueTable {
    pub n: usize,
    pub kind: TransformKind,
    pub raw: Vec<f64>,
    /// raw / raw[0].
    pub normalized: Vec<f64>,
}

impl EigenvalueTable {
    pub fn build(kind: TransformKind, n: usize, max_degree: usize) -> Result<Self> {
        let raw = (0..=max_degree)
            .map(|k| match kind {
                TransformKind::Cosine => eigenvalue_cosine(n, k),
                TransformKind::PCosine { p } => eigenvalue_p_cosine_raw(n, k, p),
                TransformKind::Radon => eigenvalue_radon(n, k),
            })
            .collect::<Result<Vec<_>>>()?;
        let unit = raw[0];
        let normalized = raw.iter().map(|v| v / unit).collect();
        Ok(Self {
            n,
            kind,
            raw,
            normalized,
        })
    }

    /// The factor that converts normalized values to raw ones (the value on 1).
    pub fn value_on_constants(&self) -> f64 {
        self.raw[0]
    }

    pub fn p(&self) -> Option<f64> {
        match self.kind {
            TransformKind::PCosine { p } => Some(p),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cosine_anchor_values() {
        assert!((eigenvalue_cosine(3, 0).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert!((eigenvalue_cosine(3, 2).unwrap() - PI / 2.0).abs() < 1e-14);
        assert!((eigenvalue_cosine(3, 4).unwrap() + PI / 12.0).abs() < 1e-14);
        for k in [1, 3, 7] {
            assert_eq!(eigenvalue_cosine(5, k).unwrap(), 0.0);
        }
    }

    #[test]
    fn p_cosine_anchor_values() {
        assert!((eigenvalue_p_cosine(3, 0, 1.0).unwrap() - 0.5).abs() < 1e-14);
        assert!((eigenvalue_p_cosine(3, 2, 1.0).unwrap() - 0.125).abs() < 1e-14);
        assert_eq!(eigenvalue_p_cosine(4, 4, 2.0).unwrap(), 0.0);
        let r = eigenvalue_p_cosine(3, 4, 1.0).unwrap() / eigenvalue_p_cosine(3, 2, 1.0).unwrap();
        assert!((r.abs() - 1.0 / 6.0).abs() < 1e-14);
    }

    #[test]
    fn p_cosine_at_one_is_cosine_over_measure() {
        for n in 3..=7 {
            for k in 0..=12 {
                let a = eigenvalue_p_cosine_raw(n, k, 1.0).unwrap();
                let b = eigenvalue_cosine(n, k).unwrap();
                assert!((a - b).abs() <= 1e-12 * b.abs().max(1e-300), "n={n} k={k}");
            }
        }
    }

    #[test]
    fn product_and_gamma_routes_agree() {
        for n in 3..=6 {
            for p in [1.0, 1.5, 2.5, 3.0, 3.7, 5.0, 9.5] {
                for k in (0..=16).step_by(2) {
                    let a = eigenvalue_p_cosine(n, k, p).unwrap();
                    let b = eigenvalue_p_cosine_gamma(n, k, p).unwrap();
                    assert!((a - b).abs() <= 1e-12 * a.abs(), "n={n} p={p} k={k}");
                }
            }
        }
    }

    #[test]
    fn even_p_limit_is_continuous() {
        // m_{p,k} is analytic in p; approach p = 4 from both sides
        for k in [0, 2, 4, 6, 8] {
            let at = eigenvalue_p_cosine(3, k, 4.0).unwrap();
            let lo = eigenvalue_p_cosine_gamma(3, k, 4.0 - 1e-7).unwrap();
            let hi = eigenvalue_p_cosine_gamma(3, k, 4.0 + 1e-7).unwrap();
            assert!((at - 0.5 * (lo + hi)).abs() < 1e-8, "k={k}");
        }
    }

    #[test]
    fn radon_anchor_values() {
        assert!((eigenvalue_radon(3, 0).unwrap() - 2.0 * PI).abs() < 1e-14);
        assert!((eigenvalue_radon(3, 2).unwrap() + PI).abs() < 1e-14);
        assert_eq!(eigenvalue_radon(4, 1).unwrap(), 0.0);
    }

    #[test]
    fn table_conversion() {
        let t = EigenvalueTable::build(TransformKind::Cosine, 3, 4).unwrap();
        assert_eq!(t.raw.len(), 5);
        assert!((t.normalized[4] * t.value_on_constants() - t.raw[4]).abs() < 1e-15);
        assert_eq!(t.normalized[0], 1.0);
    }

    #[test]
    fn rejects_invalid_parameters() {
        assert!(eigenvalue_cosine(2, 0).is_err());
        assert!(eigenvalue_p_cosine(3, 2, 0.5).is_err());
        assert!(eigenvalue_p_cosine(3, 2, f64::NAN).is_err());
    }
}
