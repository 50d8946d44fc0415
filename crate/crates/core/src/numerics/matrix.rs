//! Small dense linear algebra: symmetric matrices, cyclic Jacobi, LU and Cholesky.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MIN_DIM: usize = 3;
pub const MAX_DIM: usize = 8;
const JACOBI_SWEEPS: usize = 100;

/// Symmetric n×n matrix stored as its packed upper triangle, so symmetry is exact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymmetricMatrix {
    dim: usize,
    packed: Vec<f64>,
}

#[inline]
fn packed_index(dim: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * dim - i * (i + 1) / 2 + j
}

impl SymmetricMatrix {
    pub fn zeros(dim: usize) -> Result<Self> {
        if !(MIN_DIM..=MAX_DIM).contains(&dim) {
            return Err(Error::InvalidArgument(format!(
                "symmetric matrix dimension must lie in {MIN_DIM}..={MAX_DIM}, got {dim}"
            )));
        }
        Ok(Self {
            dim,
            packed: vec![0.0; dim * (dim + 1) / 2],
        })
    }

    pub fn identity(dim: usize) -> Result<Self> {
        Self::from_diagonal(&vec![1.0; dim])
    }

    pub fn from_diagonal(diag: &[f64]) -> Result<Self> {
        let mut m = Self::zeros(diag.len())?;
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        Ok(m)
    }

    /// Builds from `f(i, j)` evaluated on the upper triangle only.
    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut m = Self::zeros(dim)?;
        for i in 0..dim {
            for j in i..dim {
                m.set(i, j, f(i, j));
            }
        }
        Ok(m)
    }

    /// Symmetric part of a row-major square matrix.
    pub fn from_dense(dim: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != dim * dim {
            return Err(Error::InvalidArgument(
                "dense matrix has wrong length".into(),
            ));
        }
        Self::from_fn(dim, |i, j| 0.5 * (rows[i * dim + j] + rows[j * dim + i]))
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.packed[packed_index(self.dim, i, j)]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        let idx = packed_index(self.dim, i, j);
        self.packed[idx] = v;
    }

    pub fn to_dense(&self) -> Vec<f64> {
        let n = self.dim;
        let mut out = vec![0.0; n * n];
        for i in 0..n {
            for j in 0..n {
                out[i * n + j] = self.get(i, j);
            }
        }
        out
    }

    pub fn trace(&self) -> f64 {
        (0..self.dim).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        let n = self.dim;
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                s += self.get(i, j).powi(2);
            }
        }
        s.sqrt()
    }

    /// Largest |M_ij| over i != j, divided by the trace.
    pub fn off_diagonal_ratio(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                worst = worst.max(self.get(i, j).abs());
            }
        }
        worst / self.trace().abs()
    }

    /// ‖M − (tr M / n) I‖_F / tr M.
    pub fn anisotropy(&self) -> f64 {
        let mean = self.trace() / self.dim as f64;
        let mut s = 0.0;
        for i in 0..self.dim {
            for j in 0..self.dim {
                let d = if i == j { mean } else { 0.0 };
                s += (self.get(i, j) - d).powi(2);
            }
        }
        s.sqrt() / self.trace().abs()
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        (0..self.dim)
            .map(|i| (0..self.dim).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// V diag(f(λ)) Vᵀ for the eigendecomposition of `self`.
    pub fn spectral_map(&self, f: impl Fn(f64) -> f64) -> Result<SymmetricMatrix> {
        let eig = spd_eigen(self)?;
        let n = self.dim;
        let fl: Vec<f64> = eig.values.iter().map(|&l| f(l)).collect();
        Self::from_fn(n, |i, j| {
            (0..n)
                .map(|k| eig.vector(k)[i] * fl[k] * eig.vector(k)[j])
                .sum()
        })
    }
}

/// Eigenpairs sorted by descending eigenvalue; `vectors` is row-major with
/// eigenvector k stored in row k.
#[derive(Debug, Clone, PartialEq)]
pub struct Eigen {
    pub values: Vec<f64>,
    vectors: Vec<f64>,
    dim: usize,
}

impl Eigen {
    pub fn vector(&self, k: usize) -> &[f64] {
        &self.vectors[k * self.dim..(k + 1) * self.dim]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }
}

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
///
/// Despite the name, definiteness is not required; callers that need an SPD
/// matrix inspect the smallest eigenvalue.
pub fn spd_eigen(m: &SymmetricMatrix) -> Result<Eigen> {
    let n = m.dim;
    let mut a = m.to_dense();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let scale = m.frobenius_norm();
    if scale == 0.0 {
        return Ok(Eigen {
            values: vec![0.0; n],
            vectors: v,
            dim: n,
        });
    }
    let mut converged = false;
    for _ in 0..JACOBI_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q].powi(2);
            }
        }
        if off.sqrt() <= 1e-17 * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = c * vkp - s * vkq;
                    v[k * n + q] = s * vkp + c * vkq;
                }
            }
        }
    }
    if !converged {
        return Err(Error::EigenNoConvergence(JACOBI_SWEEPS));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j * n + j].total_cmp(&a[i * n + i]).then(i.cmp(&j)));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let mut vectors = Vec::with_capacity(n * n);
    for &col in &order {
        for row in 0..n {
            vectors.push(v[row * n + col]);
        }
    }
    Ok(Eigen {
        values,
        vectors,
        dim: n,
    })
}

/// LU factorization with partial pivoting of a row-major square matrix.
#[derive(Debug, Clone)]
pub struct Lu {
    n: usize,
    lu: Vec<f64>,
    perm: Vec<usize>,
    sign: f64,
}

impl Lu {
    pub fn new(n: usize, rows: &[f64]) -> Result<Self> {
        if rows.len() != n * n {
            return Err(Error::InvalidArgument(
                "dense matrix has wrong length".into(),
            ));
        }
        let mut lu = rows.to_vec();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut sign = 1.0;
        for k in 0..n {
            let pivot = (k..n)
                .max_by(|&i, &j| lu[i * n + k].abs().total_cmp(&lu[j * n + k].abs()))
                .unwrap_or(k);
            if lu[pivot * n + k] == 0.0 {
                return Err(Error::IllConditioned(f64::INFINITY));
            }
            if pivot != k {
                for j in 0..n {
                    lu.swap(k * n + j, pivot * n + j);
                }
                perm.swap(k, pivot);
                sign = -sign;
            }
            let d = lu[k * n + k];
            for i in k + 1..n {
                let f = lu[i * n + k] / d;
                lu[i * n + k] = f;
                for j in k + 1..n {
                    lu[i * n + j] -= f * lu[k * n + j];
                }
            }
        }
        Ok(Self { n, lu, perm, sign })
    }

    pub fn determinant(&self) -> f64 {
        (0..self.n)
            .map(|i| self.lu[i * self.n + i])
            .product::<f64>()
            * self.sign
    }

    pub fn solve(&self, b: &[f64]) -> Vec<f64> {
        let n = self.n;
        let mut x: Vec<f64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            for j in 0..i {
                x[i] -= self.lu[i * n + j] * x[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                x[i] -= self.lu[i * n + j] * x[j];
            }
            x[i] /= self.lu[i * n + i];
        }
        x
    }

    /// Row-major inverse.
    pub fn inverse(&self) -> Vec<f64> {
        let n = self.n;
        let mut inv = vec![0.0; n * n];
        let mut e = vec![0.0; n];
        for col in 0..n {
            e.iter_mut().for_each(|x| *x = 0.0);
            e[col] = 1.0;
            let x = self.solve(&e);
            for row in 0..n {
                inv[row * n + col] = x[row];
            }
        }
        inv
    }
}

/// Solves A x = b for symmetric positive definite A (row-major, dimension n).
/// Returns `None` when A is not numerically positive definite.
pub fn cholesky_solve(n: usize, a: &[f64], b: &[f64]) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = b.to_vec();
    for i in 0..n {
        for k in 0..i {
            y[i] -= l[i * n + k] * y[k];
        }
        y[i] /= l[i * n + i];
    }
    for i in (0..n).rev() {
        for k in i + 1..n {
            y[i] -= l[k * n + i] * y[k];
        }
        y[i] /= l[i * n + i];
    }
    Some(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_spd(n: usize, seed: u64) -> SymmetricMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        SymmetricMatrix::from_fn(n, |i, j| {
            let s: f64 = (0..n).map(|k| b[i * n + k] * b[j * n + k]).sum();
            s + if i == j { 0.5 } else { 0.0 }
        })
        .unwrap()
    }

    #[test]
    fn identity_eigenvalues() {
        let e = spd_eigen(&SymmetricMatrix::identity(3).unwrap()).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0, 1.0]);
    }

    #[test]
    fn diagonal_axis_aligned() {
        let m = SymmetricMatrix::from_diagonal(&[1.0, 4.0, 1.0]).unwrap();
        let e = spd_eigen(&m).unwrap();
        assert_eq!(e.values[0], 4.0);
        assert!((e.vector(0)[1].abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn rejects_out_of_range_dimension() {
        assert!(SymmetricMatrix::zeros(2).is_err());
        assert!(SymmetricMatrix::zeros(9).is_err());
    }

    #[test]
    fn reconstruction_and_orthonormality() {
        for seed in 0..10 {
            let n = 3 + (seed as usize % 6);
            let m = random_spd(n, seed);
            let e = spd_eigen(&m).unwrap();
            for k in 0..n {
                let mv = m.mul_vec(e.vector(k));
                let res: f64 = mv
                    .iter()
                    .zip(e.vector(k))
                    .map(|(a, b)| (a - e.values[k] * b).powi(2))
                    .sum::<f64>()
                    .sqrt();
                assert!(res <= 1e-10 * m.frobenius_norm());
                for j in 0..n {
                    let dot: f64 = e
                        .vector(k)
                        .iter()
                        .zip(e.vector(j))
                        .map(|(a, b)| a * b)
                        .sum();
                    let target = if j == k { 1.0 } else { 0.0 };
                    assert!((dot - target).abs() < 1e-12);
                }
            }
            assert!(e.values.windows(2).all(|w| w[0] >= w[1]));
        }
    }

    #[test]
    fn matches_characteristic_polynomial_roots() {
        // roots of det(M - x I) located by scanning for sign changes and bisecting
        let m = random_spd(5, 42);
        let dense = m.to_dense();
        let charpoly = |x: f64| {
            let mut a = dense.clone();
            for i in 0..5 {
                a[i * 5 + i] -= x;
            }
            Lu::new(5, &a).map(|lu| lu.determinant()).unwrap_or(0.0)
        };
        let bound: f64 = (0..5)
            .map(|i| (0..5).map(|j| m.get(i, j).abs()).sum::<f64>())
            .fold(0.0, f64::max);
        let steps = 20_000;
        let mut roots = Vec::new();
        let mut x0 = -bound - 1.0;
        let mut f0 = charpoly(x0);
        for s in 1..=steps {
            let x1 = -bound - 1.0 + (2.0 * bound + 2.0) * s as f64 / steps as f64;
            let f1 = charpoly(x1);
            if f0 == 0.0 || f0.signum() != f1.signum() {
                let (mut lo, mut hi, mut flo) = (x0, x1, f0);
                for _ in 0..200 {
                    let mid = 0.5 * (lo + hi);
                    let fm = charpoly(mid);
                    if fm.signum() == flo.signum() {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                roots.push(0.5 * (lo + hi));
            }
            x0 = x1;
            f0 = f1;
        }
        roots.sort_by(|a, b| b.total_cmp(a));
        let e = spd_eigen(&m).unwrap();
        assert_eq!(roots.len(), 5);
        for (r, l) in roots.iter().zip(&e.values) {
            assert!((r - l).abs() < 1e-8, "{r} vs {l}");
        }
    }

    #[test]
    fn lu_inverse_and_determinant() {
        let a = [2.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 4.0];
        let lu = Lu::new(3, &a).unwrap();
        assert!((lu.determinant() - 18.0).abs() < 1e-12);
        let inv = lu.inverse();
        for i in 0..3 {
            for j in 0..3 {
                let s: f64 = (0..3).map(|k| a[i * 3 + k] * inv[k * 3 + j]).sum();
                assert!((s - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn cholesky_solves_and_rejects_indefinite() {
        let a = [4.0, 1.0, 1.0, 3.0];
        let x = cholesky_solve(2, &a, &[1.0, 2.0]).unwrap();
        assert!((4.0 * x[0] + x[1] - 1.0).abs() < 1e-14);
        assert!((x[0] + 3.0 * x[1] - 2.0).abs() < 1e-14);
        assert!(cholesky_solve(2, &[1.0, 2.0, 2.0, 1.0], &[1.0, 1.0]).is_none());
    }

    #[test]
    fn spectral_map_square_root() {
        let m = random_spd(4, 7);
        let r = m.spectral_map(f64::sqrt).unwrap();
        let d = r.to_dense();
        for i in 0..4 {
            for j in 0..4 {
                let s: f64 = (0..4).map(|k| d[i * 4 + k] * d[k * 4 + j]).sum();
                assert!((s - m.get(i, j)).abs() < 1e-12);
            }
        }
    }
}
